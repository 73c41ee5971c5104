"""
Test suite for the Gaussian hierarchical topic models.

Test areas:
- core/: NIW statistics, Dirichlet counts, GEM weights, nCRP tree
- ingest/: tokenizer, vocabulary, embeddings, split and cache
- train/: sampler conditionals, training loop, checkpoints
- evaluate/: held-out likelihood, PMI coherence, topics and polysemy
- export/: DOT and JSON export
- integration/: command-line pipeline and slow synthetic-corpus checks
"""
