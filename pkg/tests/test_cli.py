import numpy as np
import pytest

from bren import preset_scene, read_image, render, srgb_encode, write_image
from bren.cli import main, read_meta


def triple_arg(e):
    return f"{e[0]!r},{e[1]!r},{e[2]!r}"


@pytest.fixture()
def synth_dir(tmp_path):
    out = tmp_path / "scene"
    assert main(["synth", "--preset", "blob", "--size", "96x96",
                 "--seed", "1", "--out-dir", str(out)]) == 0
    return out


class TestSynth:
    def test_writes_images_and_meta(self, synth_dir):
        for name in ("composite.ppm", "diffuse_gt.ppm", "specular_gt.ppm"):
            img, info = read_image(synth_dir / name)
            assert info.bit_depth == 16
            assert img.shape == (96, 96, 3)
        meta = read_meta(synth_dir / "composite.ppm.meta")
        assert meta["preset"] == "blob"
        assert meta["seed"] == "1"
        scene = preset_scene("blob", 96, 96, seed=1)
        assert float(meta["illumination_r"]) == pytest.approx(scene.illumination[0])

    def test_composite_is_sum_after_quantization(self, synth_dir):
        comp, _ = read_image(synth_dir / "composite.ppm")
        diff, _ = read_image(synth_dir / "diffuse_gt.ppm")
        spec, _ = read_image(synth_dir / "specular_gt.ppm")
        assert np.abs(comp - (diff + spec)).max() <= 2.0 / 65535.0

    def test_byte_identical_across_runs(self, synth_dir, tmp_path):
        again = tmp_path / "again"
        assert main(["synth", "--preset", "blob", "--size", "96x96",
                     "--seed", "1", "--out-dir", str(again)]) == 0
        for name in ("composite.ppm", "diffuse_gt.ppm", "specular_gt.ppm",
                     "composite.ppm.meta"):
            assert (synth_dir / name).read_bytes() == (again / name).read_bytes()

    def test_bad_preset_and_size_exit_3(self, tmp_path):
        assert main(["synth", "--preset", "disk", "--size", "64x64",
                     "--out-dir", str(tmp_path)]) == 3
        assert main(["synth", "--preset", "blob", "--size", "8x64",
                     "--out-dir", str(tmp_path)]) == 3
        assert main(["synth", "--preset", "blob", "--size", "64by64",
                     "--out-dir", str(tmp_path)]) == 3


class TestSeparate:
    def run_separate(self, tmp_path, synth_dir, *extra):
        meta = read_meta(synth_dir / "composite.ppm.meta")
        illum = ",".join(meta[f"illumination_{c}"] for c in "rgb")
        d = tmp_path / "diffuse.ppm"
        s = tmp_path / "specular.ppm"
        code = main(["separate", str(synth_dir / "composite.ppm"),
                     "--diffuse", str(d), "--specular", str(s),
                     "--illumination", illum, *extra])
        return code, d, s

    def test_outputs_and_meta(self, tmp_path, synth_dir):
        code, d, s = self.run_separate(tmp_path, synth_dir)
        assert code == 0
        diffuse, info = read_image(d)
        specular, _ = read_image(s)
        assert info.bit_depth == 16  # matches the input depth
        assert diffuse.shape == specular.shape == (96, 96, 3)
        meta = read_meta(str(d) + ".meta")
        assert meta["illumination_source"] == "user"
        assert int(meta["iterations_run"]) >= 1
        assert float(meta["tau_resolved"]) > 0
        assert meta["lambda"] == "100"
        assert int(meta["clamp_count"]) == 0

    def test_components_sum_to_input_within_quantization(self, tmp_path, synth_dir):
        code, d, s = self.run_separate(tmp_path, synth_dir)
        assert code == 0
        comp, _ = read_image(synth_dir / "composite.ppm")
        diffuse, _ = read_image(d)
        specular, _ = read_image(s)
        assert np.abs(diffuse + specular - comp).max() <= 2.0 / 65535.0

    def test_recovers_ground_truth_diffuse(self, tmp_path, synth_dir):
        code, d, _ = self.run_separate(tmp_path, synth_dir)
        assert code == 0
        diffuse, _ = read_image(d)
        gt_diffuse, _ = read_image(synth_dir / "diffuse_gt.ppm")
        assert np.sqrt(np.mean((diffuse - gt_diffuse) ** 2)) < 0.01

    def test_auto_illumination_recorded(self, tmp_path, synth_dir):
        d = tmp_path / "d.ppm"
        code = main(["separate", str(synth_dir / "composite.ppm"),
                     "--diffuse", str(d), "--specular", str(tmp_path / "s.ppm")])
        assert code == 0
        meta = read_meta(str(d) + ".meta")
        assert meta["illumination_source"] == "auto"

    def test_identity_illumination(self, tmp_path, synth_dir):
        code, d, s = self.run_separate(tmp_path, synth_dir)
        assert code == 0
        # with E=(1,1,1) reflectance equals radiance; outputs still split energy
        d2 = tmp_path / "d2.ppm"
        s2 = tmp_path / "s2.ppm"
        code = main(["separate", str(synth_dir / "composite.ppm"),
                     "--diffuse", str(d2), "--specular", str(s2),
                     "--illumination", "1,1,1"])
        assert code == 0
        comp, _ = read_image(synth_dir / "composite.ppm")
        diffuse, _ = read_image(d2)
        specular, _ = read_image(s2)
        assert np.abs(diffuse + specular - comp).max() <= 2.0 / 65535.0

    def test_dump_images(self, tmp_path, synth_dir):
        code, d, s = self.run_separate(
            tmp_path, synth_dir,
            "--dump-neuter", str(tmp_path / "n.png"),
            "--dump-essence", str(tmp_path / "e.png"),
        )
        assert code == 0
        neuter, info = read_image(tmp_path / "n.png")
        essence, _ = read_image(tmp_path / "e.png")
        assert info.format == "png"
        assert np.array_equal(neuter[:, :, 0], neuter[:, :, 1])
        assert 0.0 <= essence.min() and essence.max() <= 1.0

    def test_png_output(self, tmp_path, synth_dir):
        code, d, s = self.run_separate(tmp_path, synth_dir)
        d_png = tmp_path / "d.png"
        meta = read_meta(synth_dir / "composite.ppm.meta")
        illum = ",".join(meta[f"illumination_{c}"] for c in "rgb")
        code = main(["separate", str(synth_dir / "composite.ppm"),
                     "--diffuse", str(d_png), "--specular", str(tmp_path / "s.png"),
                     "--illumination", illum])
        assert code == 0
        from_ppm, _ = read_image(d)
        from_png, _ = read_image(d_png)
        assert np.array_equal(from_ppm, from_png)

    def test_srgb_flag_round_trips_flat_image(self, tmp_path):
        # a gray image separates into itself, so the output must equal the
        # sRGB-encoded input up to requantization
        linear = np.full((24, 24, 3), 0.2)
        src = tmp_path / "gray.ppm"
        write_image(src, srgb_encode(linear), bit_depth=16)
        d = tmp_path / "d.ppm"
        code = main(["separate", str(src), "--diffuse", str(d),
                     "--specular", str(tmp_path / "s.ppm"), "--srgb"])
        assert code == 0
        out, _ = read_image(d)
        assert np.abs(out - srgb_encode(linear)).max() <= 2.0 / 65535.0

    def test_parameter_errors_exit_3(self, tmp_path, synth_dir):
        src = str(synth_dir / "composite.ppm")
        base = ["separate", src, "--diffuse", str(tmp_path / "d.ppm"),
                "--specular", str(tmp_path / "s.ppm")]
        assert main(base + ["--connectivity", "6"]) == 3
        assert main(base + ["--epsilon", "0"]) == 3
        assert main(base + ["--lambda", "-5"]) == 3
        assert main(base + ["--tau", "huge"]) == 3
        assert main(base + ["--illumination", "1,0,1"]) == 3
        assert main(base + ["--illumination", "1;1;1"]) == 3

    def test_black_channel_auto_estimate_exits_3(self, tmp_path):
        img = np.zeros((8, 8, 3))
        img[:, :, 0] = 0.5
        src = tmp_path / "redonly.ppm"
        write_image(src, img)
        assert main(["separate", str(src), "--diffuse", str(tmp_path / "d.ppm"),
                     "--specular", str(tmp_path / "s.ppm")]) == 3

    def test_io_errors_exit_2(self, tmp_path):
        assert main(["separate", str(tmp_path / "missing.ppm"),
                     "--diffuse", str(tmp_path / "d.ppm"),
                     "--specular", str(tmp_path / "s.ppm")]) == 2
        junk = tmp_path / "junk.ppm"
        junk.write_bytes(b"not an image at all")
        assert main(["separate", str(junk),
                     "--diffuse", str(tmp_path / "d.ppm"),
                     "--specular", str(tmp_path / "s.ppm")]) == 2


class TestEval:
    def test_self_comparison(self, synth_dir, capsys):
        src = str(synth_dir / "composite.ppm")
        assert main(["eval", src, src]) == 0
        out = dict(
            line.split("=") for line in capsys.readouterr().out.strip().splitlines()
        )
        assert float(out["rmse"]) == 0.0
        assert out["psnr"] == "inf"
        assert float(out["max_abs_err"]) == 0.0

    def test_reports_difference(self, synth_dir, capsys):
        a = str(synth_dir / "composite.ppm")
        b = str(synth_dir / "diffuse_gt.ppm")
        assert main(["eval", a, b]) == 0
        out = dict(
            line.split("=") for line in capsys.readouterr().out.strip().splitlines()
        )
        assert float(out["rmse"]) > 0.0
        assert float(out["max_abs_err"]) >= float(out["rmse"])

    def test_separated_diffuse_scores_against_ground_truth(
        self, tmp_path, synth_dir, capsys
    ):
        meta = read_meta(synth_dir / "composite.ppm.meta")
        illum = ",".join(meta[f"illumination_{c}"] for c in "rgb")
        d = tmp_path / "d.ppm"
        assert main(["separate", str(synth_dir / "composite.ppm"),
                     "--diffuse", str(d), "--specular", str(tmp_path / "s.ppm"),
                     "--illumination", illum]) == 0
        capsys.readouterr()
        assert main(["eval", str(d), str(synth_dir / "diffuse_gt.ppm")]) == 0
        out = dict(
            line.split("=") for line in capsys.readouterr().out.strip().splitlines()
        )
        assert float(out["rmse"]) <= 0.02

    def test_mask_restricts_pixels(self, tmp_path, capsys):
        a = np.zeros((4, 4, 3))
        b = np.zeros((4, 4, 3))
        b[0, 0] = 1.0  # differs only in a pixel excluded by the mask
        mask = np.zeros((4, 4, 3))
        mask[2:, 2:] = 1.0
        for name, img in [("a.ppm", a), ("b.ppm", b), ("m.ppm", mask)]:
            write_image(tmp_path / name, img)
        assert main(["eval", str(tmp_path / "a.ppm"), str(tmp_path / "b.ppm"),
                     "--mask", str(tmp_path / "m.ppm")]) == 0
        out = dict(
            line.split("=") for line in capsys.readouterr().out.strip().splitlines()
        )
        assert float(out["rmse"]) == 0.0

    def test_dimension_mismatch_exits_4(self, tmp_path):
        write_image(tmp_path / "a.ppm", np.zeros((4, 4, 3)))
        write_image(tmp_path / "b.ppm", np.zeros((4, 5, 3)))
        assert main(["eval", str(tmp_path / "a.ppm"), str(tmp_path / "b.ppm")]) == 4

    def test_missing_file_exits_2(self, tmp_path):
        write_image(tmp_path / "a.ppm", np.zeros((4, 4, 3)))
        assert main(["eval", str(tmp_path / "a.ppm"), str(tmp_path / "b.ppm")]) == 2
