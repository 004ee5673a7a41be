from dataclasses import replace

from context_pyramid.commands import application
from context_pyramid.config import GradcheckConfig
from context_pyramid.ops import OP_REGISTRY
from context_pyramid.verification import GradcheckResult, build_suite


def passing_results():
    return [
        GradcheckResult("conv2d", 2e-9, 1e-5),
        GradcheckResult("end_to_end", 3e-6, 1e-4),
    ]


class TestGradcheck:
    def test_gradcheck(self, mocker, runner, tmp_path):
        mock_suite = mocker.patch(
            "context_pyramid.commands.gradcheck.run_suite",
            return_value=passing_results(),
        )
        result = runner.invoke(
            application, ["gradcheck", "--seed", "3", "--out", str(tmp_path)]
        )
        assert result.exit_code == 0
        mock_suite.assert_called_once_with(GradcheckConfig(), 3)
        assert "All 2 gradient checks passed." in result.stdout
        assert "│ conv2d " in result.stdout
        assert (tmp_path / "gradcheck.txt").read_text() == (
            "conv2d = 2e-09\nend_to_end = 3e-06\n"
        )

    def test_failure(self, mocker, runner, tmp_path):
        mocker.patch(
            "context_pyramid.commands.gradcheck.run_suite",
            return_value=[
                *passing_results(),
                GradcheckResult("add", 2e-3, 1e-5),
                GradcheckResult(
                    "sigmoid",
                    float("inf"),
                    1e-5,
                    "Op 'sigmoid' has no registered backward pass.",
                ),
            ],
        )
        result = runner.invoke(application, ["gradcheck", "--out", str(tmp_path)])
        assert result.exit_code == 1
        assert "Gradient check 'add' failed: error 2.000e-03 exceeds 1e-05." in result.stdout
        assert (
            "Gradient check 'sigmoid' failed: Op 'sigmoid' has no registered backward pass."
            in result.stdout
        )
        assert "add = 0.002" in (tmp_path / "gradcheck.txt").read_text()

    def test_single_precision_flag(self, mocker, runner):
        mock_suite = mocker.patch("context_pyramid.commands.gradcheck.run_suite")
        result = runner.invoke(application, ["gradcheck", "--precision", "f32"])
        assert result.exit_code == 1
        assert "Gradient checks require double precision" in result.stdout
        mock_suite.assert_not_called()

    def test_single_precision_config(self, mocker, runner, tmp_path, tiny_config):
        mock_suite = mocker.patch(
            "context_pyramid.commands.gradcheck.run_suite",
            return_value=passing_results(),
        )
        tiny_config.precision = "single"
        tiny_config.to_filepath(tmp_path / "single.cfg")
        result = runner.invoke(
            application, ["gradcheck", "--config", str(tmp_path / "single.cfg")]
        )
        assert result.exit_code == 1
        result = runner.invoke(
            application,
            ["gradcheck", "--config", str(tmp_path / "single.cfg"), "--precision", "f64"],
        )
        assert result.exit_code == 0
        mock_suite.assert_called_once()

    def test_broken_backward(self, mocker, runner, tmp_path):
        cases = [
            case
            for case in build_suite(GradcheckConfig(), 0)
            if case.name in ("global_avg_pool", "nearest_upsample")
        ]
        mocker.patch(
            "context_pyramid.verification.suite.build_suite", return_value=cases
        )
        upsample = OP_REGISTRY["nearest_upsample"]
        mocker.patch.dict(
            OP_REGISTRY,
            {"nearest_upsample": replace(upsample, backward=None)},
        )
        result = runner.invoke(application, ["gradcheck", "--out", str(tmp_path)])
        assert result.exit_code == 1
        assert (
            "Gradient check 'nearest_upsample' failed: Op 'nearest_upsample' has no registered backward pass."
            in result.stdout
        )
        assert "global_avg_pool = " in (tmp_path / "gradcheck.txt").read_text()
