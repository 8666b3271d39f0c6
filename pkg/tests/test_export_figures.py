from scripts.export_figures import export_all


def test_export_selected_presets(tmp_path):
    written = export_all(str(tmp_path / "figures"), "csv", only=["fig1"])
    assert [p.rsplit("/", 1)[-1] for p in written] == ["fig1_v1.csv", "fig1_v2.csv", "fig1_v3.csv"]
    header = (tmp_path / "figures" / "fig1_v1.csv").read_text(encoding="utf-8").split("\n", 1)[0]
    assert header == "t,c_total,c_zero,c_rest"
