import numpy as np
import pytest

from jobbridge.encode import encode_batch, read_texts
from jobbridge.models import resolve_spec
from jobbridge.textio import FormatError

from jobstr.embed import cosine, load_store


def test_encode_loads_in_primary_store(tiny_checkpoint, jobs_csv, tmp_path):
    out = tmp_path / "title_embeddings.csv"
    n = encode_batch(jobs_csv, resolve_spec(tiny_checkpoint), out, column="title")
    store = load_store(out)
    assert store.dimension == 768
    assert len(store) == n == 9
    # ids preserved one-to-one, in input order
    ids, _texts = read_texts(jobs_csv, "title")
    assert store.ids() == ids


def test_self_cosine_is_one(tiny_checkpoint, jobs_csv, tmp_path):
    out = tmp_path / "emb.csv"
    encode_batch(jobs_csv, resolve_spec(tiny_checkpoint), out, column="title")
    store = load_store(out)
    for key in store.ids():
        assert cosine(store[key], store[key]) == pytest.approx(1.0, abs=1e-6)


def test_encode_is_deterministic(tiny_checkpoint, jobs_csv, tmp_path):
    spec = resolve_spec(tiny_checkpoint)
    out_a, out_b = tmp_path / "a.csv", tmp_path / "b.csv"
    encode_batch(jobs_csv, spec, out_a, column="title")
    encode_batch(jobs_csv, spec, out_b, column="title")
    assert out_a.read_bytes() == out_b.read_bytes()


def test_summary_column_falls_back_to_title(tiny_checkpoint, jobs_csv, tmp_path):
    # the fixture leaves every summary cell empty, so this must not fail
    out = tmp_path / "emb.csv"
    encode_batch(jobs_csv, resolve_spec(tiny_checkpoint), out, column="summary")
    assert load_store(out).dimension == 768


def test_read_texts_rejects_missing_column(jobs_csv):
    with pytest.raises(FormatError, match="expected columns"):
        read_texts(jobs_csv, "nonexistent")


def test_distinct_titles_get_distinct_vectors(tiny_checkpoint, jobs_csv, tmp_path):
    out = tmp_path / "emb.csv"
    encode_batch(jobs_csv, resolve_spec(tiny_checkpoint), out, column="title")
    store = load_store(out)
    vecs = np.array([store[k] for k in store.ids()])
    assert len({tuple(np.round(v, 9)) for v in vecs}) == len(vecs)
