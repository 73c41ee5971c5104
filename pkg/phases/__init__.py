"""Pipeline stages: ingest, train, evaluate, export"""

__all__ = [
    'ingest',
    'train',
    'evaluate',
    'export'
]
