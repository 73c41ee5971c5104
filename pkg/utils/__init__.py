"""Utility functions: JSON/JSONL IO, file hashing and the error hierarchy"""
