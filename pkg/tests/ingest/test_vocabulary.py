#!/usr/bin/env python3
"""
Tests for tokenization, vocabulary construction, encoding and splitting.
"""

import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from config import RunConfig
from models.corpus import RawDocument
from phases.ingest import (
    build_vocabulary,
    ingest,
    read_corpus_file,
    run_ingest,
    simple_tokenize,
    split,
    split_documents,
)
from utils.errors import IngestionError


def test_tokenizer():
    print("Testing tokenizer...")
    assert simple_tokenize("The Cat, sat; on \"the\" mat!") == ["the", "cat", "sat", "on", "the", "mat"]
    assert simple_tokenize("  ...  ") == []
    print("✅ Lowercased, punctuation stripped, stop words kept")


def test_vocabulary_order_and_threshold():
    print("Testing vocabulary frequency order...")
    docs = [
        RawDocument(tokens=["b", "a", "c", "a"], doc_id=0),
        RawDocument(tokens=["b", "a", "d"], doc_id=1),
    ]
    vocab = build_vocabulary(docs, min_count=1)
    # a:3, b:2, then c and d tie at 1 and sort alphabetically
    assert vocab.words == ["a", "b", "c", "d"]
    assert build_vocabulary(docs, min_count=2).words == ["a", "b"]
    assert build_vocabulary(docs, min_count=5).words == []
    print("✅ Most frequent first, ties alphabetical")


def test_ingest_uses_training_vocabulary():
    print("Testing ingest encodes both splits with the training vocabulary...")
    corpus = ingest(
        [["x", "y", "x"], ["y", "z"], ["q"]],
        min_count=2,
        raw_test=[["x", "unseen"], ["unseen"]],
    )
    assert corpus.vocab.words == ["x", "y"]
    assert [d.tokens for d in corpus.train] == [[0, 1, 0], [1]]
    # the all-OOV training and test documents are dropped
    assert [d.tokens for d in corpus.test] == [[0]]
    assert corpus.test[0].doc_id == 3
    assert corpus.num_tokens == 4
    print("✅ OOV tokens and empty documents dropped")


def test_empty_corpus_rejected():
    print("Testing empty corpus rejection...")
    try:
        ingest([["a"], ["b"]], min_count=3)
        assert False, "Expected IngestionError"
    except IngestionError as e:
        assert "empty" in str(e)
    try:
        ingest([["a"]], min_count=0)
        assert False, "Expected IngestionError"
    except IngestionError:
        pass
    print("✅ Empty corpus raises IngestionError")


def test_split_is_deterministic():
    print("Testing seeded split...")
    docs = list(range(20))
    train_a, test_a = split_documents(docs, 5, seed=3)
    train_b, test_b = split_documents(docs, 5, seed=3)
    assert train_a == train_b and test_a == test_b
    assert sorted(train_a + test_a) == docs and len(test_a) == 5
    assert split_documents(docs, 5, seed=4) != (train_a, test_a)
    for bad in (-1, 20):
        try:
            split_documents(docs, bad, seed=0)
            assert False
        except IngestionError:
            pass
    print("✅ Same seed, same split")


def ids(docs) -> list:
    return [d.doc_id for d in docs]


def test_split_corpus_is_deterministic_and_disjoint():
    print("Testing corpus split...")
    raw = [["a", "b", "a"], ["b", "c"], ["a", "c", "c"], ["b"], ["a"], ["c", "a"], ["b", "b"], ["a", "b", "c"]]
    corpus = ingest(raw, min_count=1)
    first = split(corpus, 3, seed=7)
    second = split(corpus, 3, seed=7)
    assert ids(first.train) == ids(second.train) and ids(first.test) == ids(second.test)
    assert len(first.test) == 3 and not set(ids(first.train)) & set(ids(first.test))
    assert sorted(ids(first.train) + ids(first.test)) == ids(corpus.train)
    assert first.vocab is corpus.vocab

    everything = split(corpus, 0, seed=7)
    assert sorted(ids(everything.train)) == ids(corpus.train) and everything.test == []
    try:
        split(corpus, len(corpus.train), seed=7)
        assert False, "n_test >= document count accepted"
    except IngestionError:
        pass
    print("✅ Same seed, same disjoint split covering every document")


def test_run_ingest_splits_the_encoded_corpus():
    print("Testing run_ingest splits after encoding...")
    with tempfile.TemporaryDirectory() as tmp:
        root = Path(tmp)
        path = root / "corpus.txt"
        path.write_text("\n".join(["a b a", "b c", "a c c", "b", "a", "c a", "b b", "a b c"]) + "\n",
                        encoding="utf-8")
        config = RunConfig(corpus_path=path, cache_path=root / "cache.json", min_count=1, n_test=3, seed=7)
        stats, corpus, _ = run_ingest(config)
        expected = split(ingest(read_corpus_file(path), min_count=1), 3, seed=7)
        assert [d.doc_id for d in corpus.test] == [d.doc_id for d in expected.test]
        assert stats.train_documents == 5 and stats.test_documents == 3
        assert (root / "cache.json").exists()
    print("✅ Ingest routes through the seeded corpus split")


def test_read_corpus_file():
    print("Testing corpus file reading...")
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "corpus.txt"
        path.write_text("sports\tThe match ended.\n\nplain line here\n", encoding="utf-8")
        docs = read_corpus_file(path, first_doc_id=10)
        assert len(docs) == 2
        assert docs[0].label == "sports" and docs[0].tokens == ["the", "match", "ended"]
        assert docs[1].label is None and docs[1].doc_id == 11
        try:
            read_corpus_file(Path(tmp) / "missing.txt")
            assert False
        except FileNotFoundError:
            pass
    print("✅ Labels parsed, blank lines skipped")


if __name__ == "__main__":
    print("\n" + "=" * 50)
    print("Testing vocabulary and corpus encoding")
    print("=" * 50 + "\n")

    test_tokenizer()
    test_vocabulary_order_and_threshold()
    test_ingest_uses_training_vocabulary()
    test_empty_corpus_rejected()
    test_split_is_deterministic()
    test_split_corpus_is_deterministic_and_disjoint()
    test_run_ingest_splits_the_encoded_corpus()
    test_read_corpus_file()

    print("\n" + "=" * 50)
    print("✅ All vocabulary tests passed!")
    print("=" * 50)
