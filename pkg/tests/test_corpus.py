import sys

import pytest

from mixling.corpus import (
    Corpus,
    Token,
    corpus_from_lines,
    load_corpus,
    paragraph_from_text,
    sample_paragraphs,
    save_corpus,
    split_sentences,
)
from mixling.errors import CorpusError, PretokenizerError
from mixling.rng import derive_stream


def make_tokens(surfaces):
    return [Token(surface, i) for i, surface in enumerate(surfaces)]


def test_load_corpus_basic(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text("a b.\nc d.\n", encoding="utf-8")
    corpus = load_corpus(path)
    assert len(corpus) == 2
    assert [p.doc_id for p in corpus] == [1, 2]
    assert [t.surface for t in corpus.paragraphs[0].tokens()] == ["a", "b."]
    assert corpus.paragraphs[0].sentences[0].span == (0, 2)


def test_load_corpus_empty_file(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("", encoding="utf-8")
    assert len(load_corpus(path)) == 0


def test_blank_lines_skipped_and_doc_ids_follow_line_numbers(tmp_path):
    path = tmp_path / "corpus.txt"
    path.write_text("x\n\n  \ny z\n", encoding="utf-8")
    corpus = load_corpus(path)
    assert [p.doc_id for p in corpus] == [1, 4]


def test_invalid_utf8_aborts_with_line_number(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_bytes(b"ok line\n\xff\xfe broken\nanother ok\n")
    with pytest.raises(CorpusError, match=r":2:"):
        load_corpus(path)


def test_invalid_utf8_skip_mode_counts(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_bytes(b"ok line\n\xff\xfe broken\nanother ok\n")
    corpus = load_corpus(path, on_decode_error="skip")
    assert [p.doc_id for p in corpus] == [1, 3]
    assert corpus.skipped_lines == 1


def test_pretokenizer_splits_characters(tmp_path):
    # Stand-in external segmenter: one space-separated output line per input line.
    path = tmp_path / "thai.txt"
    path.write_text("กขค\n", encoding="utf-8")
    command = [sys.executable, "-c", "import sys\nfor line in sys.stdin:\n    print(' '.join(line.strip()))"]
    corpus = load_corpus(path, pretokenizer=command)
    assert [t.surface for t in corpus.paragraphs[0].tokens()] == ["ก", "ข", "ค"]


def test_pretokenizer_nonzero_exit_aborts_with_stderr(tmp_path):
    path = tmp_path / "x.txt"
    path.write_text("a\n", encoding="utf-8")
    command = [sys.executable, "-c", "import sys; sys.stderr.write('boom'); sys.exit(3)"]
    with pytest.raises(PretokenizerError, match="boom"):
        load_corpus(path, pretokenizer=command)


def test_pretokenizer_line_count_mismatch(tmp_path):
    path = tmp_path / "x.txt"
    path.write_text("a\nb\n", encoding="utf-8")
    command = [sys.executable, "-c", "print('only one line')"]
    with pytest.raises(PretokenizerError, match="2 input lines"):
        load_corpus(path, pretokenizer=command)


def test_split_sentences_examples():
    two = split_sentences(make_tokens(["a", "b.", "c", "d?"]))
    assert [s.span for s in two] == [(0, 2), (2, 4)]
    one = split_sentences(make_tokens(["a", "b", "c"]))
    assert [s.span for s in one] == [(0, 3)]
    assert [s.span for s in split_sentences(make_tokens(["x!"]))] == [(0, 1)]
    with pytest.raises(ValueError):
        split_sentences([])


def test_sentence_spans_partition_random_paragraphs():
    stream = derive_stream(0, 777)
    for _ in range(200):
        n = 1 + stream.randbelow(30)
        surfaces = []
        for i in range(n):
            word = f"w{i}"
            if stream.random() < 0.2:
                word += "."
            surfaces.append(word)
        paragraph = paragraph_from_text(" ".join(surfaces), 1)
        spans = [s.span for s in paragraph.sentences]
        assert spans[0][0] == 0
        assert spans[-1][1] == n
        for (_, prev_end), (start, _) in zip(spans, spans[1:]):
            assert prev_end == start
        assert [t.surface for t in paragraph.tokens()] == surfaces
        assert [t.index for t in paragraph.tokens()] == list(range(n))


def test_round_trip_through_file(tmp_path):
    lines = ["a b. c d?", "single", "x! y", "ก ข ค."]
    corpus = corpus_from_lines(lines)
    path = tmp_path / "out.txt"
    save_corpus(corpus, path)
    reloaded = load_corpus(path)
    assert reloaded.paragraphs == corpus.paragraphs


def test_token_validation():
    with pytest.raises(ValueError):
        Token("", 0)
    with pytest.raises(ValueError):
        Token("a b", 0)
    with pytest.raises(ValueError):
        Token("ok", -1)


def test_structure_validation():
    from mixling.corpus import Paragraph, Sentence

    token = Token("x", 0)
    with pytest.raises(ValueError):
        Sentence((), (0, 0))
    with pytest.raises(ValueError):
        Sentence((token,), (0, 2))
    with pytest.raises(ValueError):
        Paragraph((), 1)
    with pytest.raises(ValueError):  # spans must start at 0 and be contiguous
        Paragraph((Sentence((Token("y", 1),), (1, 2)),), 1)


def test_sample_identity_when_n_at_least_size():
    corpus = corpus_from_lines([f"w{i}" for i in range(5)])
    assert sample_paragraphs(corpus, 5, seed=1) is corpus
    assert sample_paragraphs(corpus, 9, seed=1) is corpus


def test_sample_is_deterministic_and_order_preserving():
    corpus = corpus_from_lines([f"w{i}" for i in range(10)])
    first = sample_paragraphs(corpus, 3, seed=7)
    second = sample_paragraphs(corpus, 3, seed=7)
    assert first.paragraphs == second.paragraphs
    assert len(first) == 3
    ids = [p.doc_id for p in first]
    assert ids == sorted(ids)
    # a different seed should eventually pick a different subset
    others = {tuple(p.doc_id for p in sample_paragraphs(corpus, 3, seed=s)) for s in range(20)}
    assert len(others) > 1


def test_sample_does_not_mutate_corpus():
    corpus = corpus_from_lines([f"w{i}" for i in range(10)])
    before = corpus.paragraphs
    sample_paragraphs(corpus, 4, seed=3)
    assert corpus.paragraphs == before


def test_sample_rejects_negative():
    corpus = corpus_from_lines(["a"])
    with pytest.raises(ValueError):
        sample_paragraphs(corpus, -1, seed=0)
