from __future__ import annotations

import subprocess
import sys

import numpy as np
import pytest

from cldbrush import (
    DefaultColor,
    FillMode,
    RenderMode,
    RgbImage,
    cld_at,
    default_scan_limit,
    global_mean,
    load_image,
    save_image,
    to_gray,
)
from cldbrush.cli import main, parse_args

from .conftest import natural_image


@pytest.fixture()
def sample(tmp_path):
    path = tmp_path / "in.ppm"
    save_image(natural_image(64, 64, seed=13), path)
    return path


def out_path(tmp_path, name="out.ppm"):
    return tmp_path / name


class TestParsing:
    def test_defaults(self, tmp_path):
        inv = parse_args([str(tmp_path / "a.png"), str(tmp_path / "b.png")])
        cfg = inv.config
        assert cfg.mode is RenderMode.CLDPB
        assert cfg.tau == 0.2
        assert cfg.size == 2.0
        assert cfg.steps == 3
        assert cfg.fill_mode is FillMode.NON_DISPLACED
        assert cfg.default_color == DefaultColor.white()
        assert cfg.d0 == 10.0
        assert cfg.seed == 0
        assert cfg.threads == 1

    def test_cpb_flags(self, tmp_path):
        inv = parse_args(["--mode", "cpb", "--radius", "4", str(tmp_path / "a.png"), str(tmp_path / "b.png")])
        assert inv.config.mode is RenderMode.CPB and inv.config.radius == 4.0

    def test_every_field_reachable(self, tmp_path):
        inv = parse_args(
            [
                "--mode", "cldpb", "--tau", "0.3", "--size", "5", "--steps", "2",
                "--spacing-min", "3", "--spacing-max", "9", "--delta", "2",
                "--fill", "displaced", "--default-color", "blend:0.25",
                "--d0", "6", "--seed", "77", "--threads", "2",
                str(tmp_path / "a.png"), str(tmp_path / "b.png"),
            ]
        )
        cfg = inv.config
        assert (cfg.tau, cfg.size, cfg.steps) == (0.3, 5.0, 2)
        assert (cfg.spacing_min, cfg.spacing_max, cfg.delta) == (3, 9, 2)
        assert cfg.fill_mode is FillMode.DISPLACED
        assert cfg.default_color == DefaultColor.blend(0.25)
        assert (cfg.d0, cfg.seed, cfg.threads) == (6.0, 77, 2)

    @pytest.mark.parametrize(
        "argv",
        [
            ["--tau", "-1"],
            ["--mode", "cpb", "--tau", "0.3"],
            ["--mode", "cpb", "--size", "4"],
            ["--radius", "4"],  # default mode is cldpb
            ["--unknown-flag"],
            ["--steps", "0"],
            ["--default-color", "purple"],
            ["--cld-dump", "nope"],
            ["--delta", "xyz"],
            ["--delta", "-3"],
            ["--default-color", "blend:2.0"],
        ],
    )
    def test_usage_errors_exit_one(self, argv, tmp_path):
        code = main(argv + [str(tmp_path / "a.png"), str(tmp_path / "b.png")])
        assert code == 1

    def test_same_input_output_rejected(self, tmp_path):
        p = str(tmp_path / "x.png")
        assert main([p, p]) == 1

    def test_help_lists_flags(self, capsys):
        assert main(["--help"]) == 0
        text = capsys.readouterr().out
        for flag in ("--mode", "--tau", "--size", "--radius", "--steps", "--spacing-min",
                     "--spacing-max", "--delta", "--fill", "--default-color", "--d0",
                     "--seed", "--threads", "--manifest", "--gray-dump", "--cld-dump",
                     "--report", "--config"):
            assert flag in text


class TestRunAndExitCodes:
    def test_successful_render(self, sample, tmp_path):
        out = out_path(tmp_path)
        assert main([str(sample), str(out)]) == 0
        rendered = load_image(out)
        assert (rendered.width, rendered.height) == (64, 64)

    def test_png_output(self, sample, tmp_path):
        out = out_path(tmp_path, "out.png")
        assert main([str(sample), str(out)]) == 0
        assert load_image(out).width == 64

    def test_byte_identical_across_invocations(self, sample, tmp_path):
        out1, out2 = out_path(tmp_path, "a.ppm"), out_path(tmp_path, "b.ppm")
        assert main([str(sample), str(out1)]) == 0
        assert main([str(sample), str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_threads_do_not_change_bytes(self, sample, tmp_path):
        out1, out4 = out_path(tmp_path, "t1.ppm"), out_path(tmp_path, "t4.ppm")
        assert main(["--threads", "1", str(sample), str(out1)]) == 0
        assert main(["--threads", "4", str(sample), str(out4)]) == 0
        assert out1.read_bytes() == out4.read_bytes()

    def test_missing_input_exit_two(self, tmp_path):
        assert main([str(tmp_path / "missing.ppm"), str(tmp_path / "o.ppm")]) == 2

    def test_corrupt_input_exit_three(self, tmp_path):
        bad = tmp_path / "bad.ppm"
        bad.write_bytes(b"P6\n8 8\n255\n\x00")
        assert main([str(bad), str(tmp_path / "o.ppm")]) == 3

    def test_unsupported_input_exit_three(self, tmp_path):
        bad = tmp_path / "img.gif"
        bad.write_bytes(b"GIF89a")
        assert main([str(bad), str(tmp_path / "o.ppm")]) == 3

    def test_unwritable_output_exit_four(self, sample, tmp_path):
        out = tmp_path / "no" / "such" / "dir" / "o.ppm"
        assert main([str(sample), str(out)]) == 4
        assert not out.exists()

    def test_unsupported_output_extension_exit_four(self, sample, tmp_path):
        assert main([str(sample), str(tmp_path / "o.tiff")]) == 4

    def test_cpb_mode_runs(self, sample, tmp_path):
        out = out_path(tmp_path)
        assert main(["--mode", "cpb", "--radius", "3", str(sample), str(out)]) == 0
        assert load_image(out).width == 64


class TestManifestAndConfig:
    def test_manifest_written_sorted_and_replayable(self, sample, tmp_path):
        out1 = out_path(tmp_path, "m1.ppm")
        argv = ["--tau", "0.25", "--size", "3", "--seed", "11", "--manifest", str(sample), str(out1)]
        assert main(argv) == 0
        manifest = tmp_path / "m1.ppm.manifest"
        assert manifest.exists()
        lines = manifest.read_text().splitlines()
        keys = [line.split("=", 1)[0] for line in lines]
        assert keys == sorted(keys)
        assert "rng=" in manifest.read_text()
        # replay through --config reproduces the bytes exactly
        out2 = out_path(tmp_path, "m2.ppm")
        assert main(["--config", str(manifest), str(sample), str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_flag_overrides_config(self, sample, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("tau=0.3\nseed=5\n")
        inv = parse_args(["--config", str(cfg), "--tau", "0.4", str(sample), str(tmp_path / "o.ppm")])
        assert inv.config.tau == 0.4 and inv.config.seed == 5

    def test_config_overrides_defaults(self, sample, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("# comment line\nsteps=7\n\ndelta=auto\n")
        inv = parse_args(["--config", str(cfg), str(sample), str(tmp_path / "o.ppm")])
        assert inv.config.steps == 7 and inv.config.delta is None

    def test_unknown_config_key_is_usage_error(self, sample, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("nonsense=1\n")
        assert main(["--config", str(cfg), str(sample), str(tmp_path / "o.ppm")]) == 1

    def test_foreign_rng_identifier_rejected(self, sample, tmp_path):
        cfg = tmp_path / "cfg.txt"
        cfg.write_text("rng=other-generator\n")
        assert main(["--config", str(cfg), str(sample), str(tmp_path / "o.ppm")]) == 1


class TestDebugDumps:
    def test_gray_dump_matches_library(self, sample, tmp_path):
        dump = tmp_path / "gray.txt"
        assert main(["--gray-dump", str(dump), str(sample), str(out_path(tmp_path))]) == 0
        lines = dump.read_text().splitlines()
        img = load_image(sample)
        gray = to_gray(img)
        assert lines[0] == f"m0={global_mean(gray)!r}"
        assert len(lines) == 1 + img.height
        row0 = np.array([float(v) for v in lines[1].split(",")])
        assert np.array_equal(row0, gray.values[0])

    def test_cld_dump_matches_library(self, sample, tmp_path, capsys):
        assert main(["--cld-dump", "20,30", str(sample), str(out_path(tmp_path))]) == 0
        out = capsys.readouterr().out.splitlines()
        img = load_image(sample)
        gray = to_gray(img)
        m0 = global_mean(gray)
        diagram = cld_at(gray, m0, 20, 30, 0.2, default_scan_limit(64, 64))
        lengths = [int(v) for v in out[0].removeprefix("lengths=").split(",")]
        defined = [v == "1" for v in out[1].removeprefix("defined=").split(",")]
        assert lengths == diagram.lengths.tolist()
        assert defined == diagram.defined.tolist()

    def test_cld_dump_out_of_bounds_is_usage_error(self, sample, tmp_path):
        assert main(["--cld-dump", "999,0", str(sample), str(out_path(tmp_path))]) == 1


def test_module_entry_point_runs(tmp_path):
    src = tmp_path / "in.ppm"
    save_image(RgbImage.constant(16, 16, (50, 60, 70)), src)
    out = tmp_path / "out.ppm"
    proc = subprocess.run(
        [sys.executable, "-m", "cldbrush", str(src), str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.exists()
