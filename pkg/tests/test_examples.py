"""The shipped example corpus stays frozen: ids, classes, shapes."""

import pytest

from polyred.examples import builtin_example, builtin_ids, corpus
from polyred.maps import is_yagzhev


def test_ids_cover_the_advertised_classes():
    ids = builtin_ids()
    assert "pinchuk" in ids
    assert "identity2" in ids
    classes = {builtin_example(i).document.metadata.get("class") for i in ids}
    assert {"curated", "yagzhev", "random"} <= classes


def test_ids_sorted_within_class_listing():
    assert builtin_ids() == sorted(builtin_ids(), key=builtin_ids().index)
    assert len(set(builtin_ids())) == len(builtin_ids())


def test_unknown_id_mentions_the_listing_command():
    with pytest.raises(ValueError, match="examples list"):
        builtin_example("no-such-map")


def test_pinchuk_shape():
    entry = builtin_example("pinchuk")
    f = entry.document.to_polymap()
    assert f.n_in == f.n_out == 2
    assert sorted(c.degree() for c in f.components) == [10, 25]
    assert entry.expected["dex"] == 6
    assert entry.expected["mfs_observed"] == 2
    assert entry.expected["sag_external"] == 1


def test_yagzhev_corpus_is_yagzhev():
    entries = corpus("yagzhev")
    assert len(entries) >= 10
    for e in entries:
        f = e.document.to_polymap()
        assert is_yagzhev(f), e.id
        assert f.n_in <= 4


def test_random_corpus_degrees_and_dims():
    entries = corpus("random")
    assert len(entries) >= 9
    for e in entries:
        f = e.document.to_polymap()
        assert f.n_in <= 3
        assert 4 <= f.degree() <= 6, e.id


def test_corpus_filter_matches_metadata():
    for cls in ("curated", "yagzhev", "random"):
        for e in corpus(cls):
            assert e.document.metadata["class"] == cls
    assert len(corpus()) == len(builtin_ids())
