from context_pyramid.commands import application
from context_pyramid.serialisers import read_pgm


class TestDumpAttention:
    def test_dump(self, runner, tiny_config, tiny_config_file):
        result = runner.invoke(
            application, ["dump-attention", "--config", str(tiny_config_file)]
        )
        assert result.exit_code == 0
        directory = tiny_config.output.directory
        for module in ("cxam", "cnam"):
            pixels = read_pgm(directory / f"{module}_attn.pgm")
            assert pixels.shape == (1, 1)
            assert not pixels.any()
        metadata = (directory / "attention.txt").read_text()
        assert "cxam.file = cxam_attn.pgm" in metadata
        assert "cnam.height = 1" in metadata
        assert "cxam.constant = true" in metadata

    def test_larger_image(self, runner, tmp_path, tiny_config):
        tiny_config.input.shape = [1, 3, 96, 64]
        tiny_config.to_filepath(tmp_path / "larger.cfg")
        result = runner.invoke(
            application, ["dump-attention", "--config", str(tmp_path / "larger.cfg")]
        )
        assert result.exit_code == 0
        pixels = read_pgm(tiny_config.output.directory / "cnam_attn.pgm")
        assert pixels.shape == (3, 2)
        assert pixels.min() == 0
        assert pixels.max() == 255

    def test_single_module(self, runner, tmp_path, tiny_config):
        tiny_config.attention.cnam = False
        tiny_config.to_filepath(tmp_path / "cxam_only.cfg")
        result = runner.invoke(
            application, ["dump-attention", "--config", str(tmp_path / "cxam_only.cfg")]
        )
        assert result.exit_code == 0
        assert "Skipping 'cnam', which is disabled." in result.stdout
        assert (tiny_config.output.directory / "cxam_attn.pgm").is_file()
        assert not (tiny_config.output.directory / "cnam_attn.pgm").exists()

    def test_disabled(self, runner, no_attention_config_file):
        result = runner.invoke(
            application, ["dump-attention", "--config", str(no_attention_config_file)]
        )
        assert result.exit_code == 1
        assert "Attention maps need" in result.stdout
