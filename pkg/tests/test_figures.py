from capeval.benchmark.protocol import CategoryResult, MetricReport
from capeval.benchmark.systems import WinFractionReport
from capeval.figures import save_accuracy_figure, save_win_fraction_figure


def _report(name, accs, total):
    rep = MetricReport(metric_name=name)
    for cat, (correct, included) in accs.items():
        rep.per_category[cat] = CategoryResult(correct, included)
    rep.total = CategoryResult(*total)
    return rep


def test_accuracy_figure_written(tmp_path):
    reports = [
        _report("bleu_1", {"HC": (1, 2), "HI": (2, 2), "HM": (1, 2), "MM": (1, 4)}, (5, 10)),
        _report("fense", {"HC": (2, 2), "HI": (2, 2), "HM": (2, 2), "MM": (3, 4)}, (9, 10)),
    ]
    out = tmp_path / "accuracy.png"
    save_accuracy_figure(reports, out)
    assert out.stat().st_size > 1000


def test_accuracy_figure_tolerates_empty_categories(tmp_path):
    rep = _report("bleu_1", {"HC": (1, 2)}, (1, 2))
    out = tmp_path / "sparse.png"
    save_accuracy_figure([rep], out)
    assert out.exists()


def test_win_fraction_figure_written(tmp_path):
    gold = WinFractionReport(fractions={"sys1": 0.75, "sys2": 0.25})
    metric = WinFractionReport(fractions={"sys1": 0.6, "sys2": 0.4})
    out = tmp_path / "wins.png"
    save_win_fraction_figure({"gold": gold, "fense": metric}, out)
    assert out.stat().st_size > 1000


def test_win_fraction_figure_tolerates_no_systems(tmp_path):
    out = tmp_path / "empty.png"
    save_win_fraction_figure({"gold": WinFractionReport()}, out)
    assert out.exists()
