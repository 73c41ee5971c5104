"""
Gaussian hierarchical topic models - collapsed Gibbs samplers for LDA,
Gaussian LDA, hLDA and Gaussian hLDA over word embeddings
Version: 1.0.0
"""

__version__ = "1.0.0"
