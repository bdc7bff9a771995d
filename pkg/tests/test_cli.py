import json

from click.testing import CliRunner

from segconv.cli import main
from segconv.synth import gen_synthetic
from segconv.tensor_io import load_raw_tensor, save_raw_tensor

TINY = [{"name": "tiny", "input_h": 4, "input_w": 4, "c_in": 1,
         "kernel_n": 3, "c_out": 1, "pad": 1, "repeats": 1}]


def _write_config(tmp_path, records=None):
    path = tmp_path / "configs.json"
    path.write_text(json.dumps(records if records is not None else TINY))
    return path


def test_run_json_output(tmp_path):
    config = _write_config(tmp_path)
    result = CliRunner().invoke(main, ["run", "--config", str(config)])
    assert result.exit_code == 0, result.output
    report = json.loads(result.output)
    assert report["layers"][0]["name"] == "tiny"
    assert report["layers"][0]["equivalence"]["passed"] is True


def test_run_markdown_to_file(tmp_path):
    config = _write_config(tmp_path)
    out = tmp_path / "report.md"
    result = CliRunner().invoke(main, ["run", "--config", str(config),
                                       "--format", "markdown", "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert "| tiny |" in out.read_text()


def test_run_csv_format(tmp_path):
    config = _write_config(tmp_path)
    result = CliRunner().invoke(main, ["run", "--config", str(config),
                                       "--format", "csv"])
    assert result.exit_code == 0
    assert result.output.splitlines()[0].startswith("layer,input_size")


def test_run_bad_config_file_exits_2(tmp_path):
    path = tmp_path / "configs.json"
    path.write_text("not json")
    result = CliRunner().invoke(main, ["run", "--config", str(path)])
    assert result.exit_code == 2
    assert "error:" in result.output


def test_run_missing_config_file_exits_2(tmp_path):
    result = CliRunner().invoke(main, ["run", "--config", str(tmp_path / "nope.json")])
    assert result.exit_code == 2


def test_run_impossible_layer_exits_1(tmp_path):
    config = _write_config(tmp_path, [{"name": "imp", "input_h": 1, "input_w": 1,
                                       "c_in": 1, "kernel_n": 9, "c_out": 1,
                                       "pad": 0, "repeats": 1}])
    result = CliRunner().invoke(main, ["run", "--config", str(config)])
    assert result.exit_code == 1
    assert "FAILED imp" in result.output


def test_run_with_input_dir(tmp_path):
    config = _write_config(tmp_path)
    save_raw_tensor(gen_synthetic(1, 4, 4, seed=3), tmp_path / "tiny.sct")
    result = CliRunner().invoke(main, ["run", "--config", str(config),
                                       "--input-dir", str(tmp_path)])
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["layers"][0]["input_source"] == "file:tiny.sct"


def test_verify_pass(tmp_path):
    result = CliRunner().invoke(main, ["verify", "--n", "5", "--size", "4",
                                       "--pad", "2"])
    assert result.exit_code == 0, result.output
    assert "PASS" in result.output
    assert "output: 7x7" in result.output


def test_verify_impossible_case_exits_2():
    result = CliRunner().invoke(main, ["verify", "--n", "9", "--size", "1"])
    assert result.exit_code == 2


def test_convert_roundtrip(tmp_path):
    ppm = tmp_path / "img.ppm"
    ppm.write_bytes(b"P6 1 1 255\n" + bytes([255, 128, 0]))
    sct = tmp_path / "img.sct"
    result = CliRunner().invoke(main, ["convert", str(ppm), str(sct)])
    assert result.exit_code == 0, result.output
    tensor = load_raw_tensor(sct)
    assert tensor.shape == (3, 1, 1)


def test_convert_bad_ppm_exits_2(tmp_path):
    ppm = tmp_path / "img.ppm"
    ppm.write_bytes(b"P5 1 1 255\n\x00")
    result = CliRunner().invoke(main, ["convert", str(ppm), str(tmp_path / "o.sct")])
    assert result.exit_code == 2


def test_convert_missing_input_exits_2(tmp_path):
    result = CliRunner().invoke(main, ["convert", str(tmp_path / "nope.ppm"),
                                       str(tmp_path / "o.sct")])
    assert result.exit_code == 2


def test_missing_required_option_exits_2():
    result = CliRunner().invoke(main, ["run"])
    assert result.exit_code == 2


def test_gan_suite_help():
    result = CliRunner().invoke(main, ["gan-suite", "--help"])
    assert result.exit_code == 0
    assert "--engine" in result.output
