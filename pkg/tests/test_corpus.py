import json

import pytest

from commaclf.corpus import (
    Corpus,
    CorpusFormatError,
    Instance,
    LabelTriple,
    corpus_stats,
    load_dataset,
    load_dataset_with_report,
    save_dataset,
)

HEADER = "id\ttext\taggression\tgender\tcommunal\n"


def write_tsv(path, rows, header=HEADER):
    path.write_text(header + "".join(rows), encoding="utf-8")
    return path


class TestLabelTriple:
    def test_valid(self):
        triple = LabelTriple("NAG", "NGEN", "NCOM")
        assert triple.for_task("aggression") == "NAG"
        assert triple.as_tuple() == ("NAG", "NGEN", "NCOM")

    @pytest.mark.parametrize("bad", [("XAG", "GEN", "COM"), ("NAG", "COM", "COM"), ("NAG", "GEN", "GEN")])
    def test_invalid_members_rejected(self, bad):
        with pytest.raises(ValueError):
            LabelTriple(*bad)

    def test_unknown_task(self):
        with pytest.raises(ValueError):
            LabelTriple("NAG", "NGEN", "NCOM").for_task("stance")


class TestInstanceAndCorpus:
    def test_empty_id_or_text_rejected(self):
        with pytest.raises(ValueError):
            Instance("", "x")
        with pytest.raises(ValueError):
            Instance("a", "")

    def test_duplicate_ids_rejected(self):
        a = Instance("a", "x")
        with pytest.raises(ValueError):
            Corpus("c", (a, a), labeled=False)

    def test_labeled_flag_must_match(self):
        inst = Instance("a", "x")
        with pytest.raises(ValueError):
            Corpus("c", (inst,), labeled=True)


class TestLoadDataset:
    def test_noisy_instance_retained_with_triple(self, tmp_path):
        path = write_tsv(tmp_path / "d.tsv", ["C575.31\trrrrrrrr\tNAG\tNGEN\tNCOM\n"])
        corpus = load_dataset(path, labeled=True)
        assert len(corpus) == 1
        inst = corpus.instances[0]
        assert inst.id == "C575.31"
        assert inst.labels == LabelTriple("NAG", "NGEN", "NCOM")

    def test_nan_and_empty_text_dropped_and_counted(self, tmp_path):
        rows = [
            "a\tok text\tNAG\tNGEN\tNCOM\n",
            "b\tNaN\tNAG\tNGEN\tNCOM\n",
            "c\tnan\tNAG\tNGEN\tNCOM\n",
            "d\t   \tNAG\tNGEN\tNCOM\n",
            "e\tanother\tOAG\tGEN\tCOM\n",
        ]
        corpus, report = load_dataset_with_report(write_tsv(tmp_path / "d.tsv", rows), labeled=True)
        assert len(corpus) == 2
        assert report.dropped == 3
        assert report.reasons["nan_text"] == 2
        assert report.reasons["empty_text"] == 1
        assert report.retained + report.dropped == report.total_rows == 5

    def test_unknown_label_dropped_lenient_raises_strict(self, tmp_path):
        rows = ["a\tok\tNAG\tNGEN\tNCOM\n", "b\tbad\tWAT\tNGEN\tNCOM\n"]
        path = write_tsv(tmp_path / "d.tsv", rows)
        corpus, report = load_dataset_with_report(path, labeled=True)
        assert len(corpus) == 1
        assert report.reasons["bad_label"] == 1
        with pytest.raises(CorpusFormatError):
            load_dataset(path, labeled=True, strict=True)

    def test_labels_normalized_case(self, tmp_path):
        path = write_tsv(tmp_path / "d.tsv", ["a\tok\tnag\tngen\tncom\n"])
        corpus = load_dataset(path, labeled=True)
        assert corpus.instances[0].labels == LabelTriple("NAG", "NGEN", "NCOM")

    def test_duplicate_id_keeps_first(self, tmp_path):
        rows = ["a\tfirst\tNAG\tNGEN\tNCOM\n", "a\tsecond\tOAG\tGEN\tCOM\n"]
        corpus, report = load_dataset_with_report(write_tsv(tmp_path / "d.tsv", rows), labeled=True)
        assert len(corpus) == 1
        assert corpus.instances[0].text == "first"
        assert report.reasons["duplicate_id"] == 1

    def test_malformed_row_dropped_lenient_raises_strict(self, tmp_path):
        rows = ["a\tok\tNAG\tNGEN\tNCOM\n", "b\tonly three fields\tNAG\n"]
        path = write_tsv(tmp_path / "d.tsv", rows)
        corpus, report = load_dataset_with_report(path, labeled=True)
        assert len(corpus) == 1
        assert report.reasons["malformed_row"] == 1
        with pytest.raises(CorpusFormatError):
            load_dataset(path, labeled=True, strict=True)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_dataset(tmp_path / "absent.tsv", labeled=False)

    def test_missing_label_column_is_hard_error(self, tmp_path):
        path = write_tsv(tmp_path / "d.tsv", ["a\tok\n"], header="id\ttext\n")
        assert len(load_dataset(path, labeled=False)) == 1
        with pytest.raises(CorpusFormatError):
            load_dataset(path, labeled=True)

    def test_missing_required_column(self, tmp_path):
        path = write_tsv(tmp_path / "d.tsv", ["ok\n"], header="text\n")
        with pytest.raises(CorpusFormatError):
            load_dataset(path, labeled=False)

    def test_sidecar_written(self, tmp_path):
        path = write_tsv(tmp_path / "d.tsv", ["a\tok\tNAG\tNGEN\tNCOM\n", "b\tNaN\tNAG\tNGEN\tNCOM\n"])
        load_dataset(path, labeled=True)
        sidecar = json.loads((tmp_path / "d.tsv.drops.json").read_text())
        assert sidecar == {"dropped": 1, "reasons": {"nan_text": 1}}

    def test_stderr_report(self, tmp_path, capsys):
        path = write_tsv(tmp_path / "d.tsv", ["a\tok\tNAG\tNGEN\tNCOM\n"])
        load_dataset(path, labeled=True)
        assert "kept 1 of 1" in capsys.readouterr().err

    def test_order_preserved(self, tmp_path):
        rows = [f"r{i}\ttext {i}\tNAG\tNGEN\tNCOM\n" for i in range(20)]
        corpus = load_dataset(write_tsv(tmp_path / "d.tsv", rows), labeled=True)
        assert [inst.id for inst in corpus] == [f"r{i}" for i in range(20)]

    def test_csv_with_quoting(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text(
            'id,text,aggression,gender,communal\na,"hello, there",NAG,NGEN,NCOM\n', encoding="utf-8"
        )
        corpus = load_dataset(path, labeled=True)
        assert corpus.instances[0].text == "hello, there"


class TestRoundTrip:
    @pytest.mark.parametrize("suffix", [".tsv", ".csv"])
    def test_save_load_round_trip(self, tmp_path, suffix, four_doc_gender_corpus):
        path = tmp_path / ("out" + suffix)
        save_dataset(four_doc_gender_corpus, path)
        reloaded = load_dataset(path, labeled=True, name=four_doc_gender_corpus.name)
        assert reloaded == four_doc_gender_corpus

    def test_unlabeled_round_trip(self, tmp_path):
        corpus = Corpus("u", (Instance("a", "x y"), Instance("b", "z")), labeled=False)
        path = save_dataset(corpus, tmp_path / "u.tsv")
        assert load_dataset(path, labeled=False, name="u") == corpus

    def test_csv_round_trips_commas_and_newlines(self, tmp_path):
        corpus = Corpus("u", (Instance("a", "one, two\nthree"),), labeled=False)
        path = save_dataset(corpus, tmp_path / "u.csv")
        assert load_dataset(path, labeled=False, name="u") == corpus


class TestCorpusStats:
    def test_empty(self):
        stats = corpus_stats(Corpus("e", (), labeled=False))
        assert (stats.instances, stats.tokens, stats.chars) == (0, 0, 0)

    def test_single_instance(self):
        stats = corpus_stats(Corpus("one", (Instance("a", "a b"),), labeled=False))
        assert (stats.instances, stats.tokens, stats.chars) == (1, 2, 3)

    def test_tokens_via_tokenizer(self):
        stats = corpus_stats(Corpus("p", (Instance("a", "Hello, world!!"),), labeled=False))
        assert stats.tokens == 5
