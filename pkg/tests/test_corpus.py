import networkx as nx
import pytest

from qwalk.corpus import ENV_VAR, builtin_graphs, connected_graphs, corpus_dir, load_corpus, write_corpus


def test_counts_match_known_sequence():
    # connected graphs on n unlabeled vertices: 1, 1, 2, 6, 21 for n = 1..5
    assert [len(connected_graphs(n)) for n in range(2, 6)] == [1, 2, 6, 21]


def test_classes_pairwise_non_isomorphic():
    for n in range(2, 6):
        graphs = [nx.Graph(list(es)) for es in connected_graphs(n)]
        for i, a in enumerate(graphs):
            assert nx.is_connected(a) and a.number_of_nodes() == n
            for b in graphs[i + 1:]:
                assert not nx.is_isomorphic(a, b)


def test_shipped_files_match_generator():
    shipped = dict(load_corpus())
    built = builtin_graphs()
    assert set(shipped) == set(built)
    for name, g in built.items():
        assert shipped[name].edges == g.edges
    assert "petersen" in shipped and "c8" in shipped and len(shipped) == 32


def test_env_override(tmp_path, monkeypatch):
    (tmp_path / "tri.txt").write_text("0 1\n1 2\n2 0\n")
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    assert corpus_dir() == tmp_path
    corpus = load_corpus()
    assert [name for name, _ in corpus] == ["tri"]


def test_empty_directory_rejected(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_corpus(tmp_path)


def test_write_corpus_round_trip(tmp_path):
    written = write_corpus(tmp_path)
    assert len(written) == 32
    again = dict(load_corpus(tmp_path))
    assert again["n4_00"].edges == builtin_graphs()["n4_00"].edges
