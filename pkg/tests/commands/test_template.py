from context_pyramid.commands import application
from context_pyramid.config import RunConfig


class TestTemplate:
    def test_template(self, runner):
        result = runner.invoke(application, ["template"])
        assert result.exit_code == 0
        assert "cem.rates = 3, 6, 12, 18, 24" in result.stdout
        assert "attention.cxam = true" in result.stdout
        assert "precision = single" in result.stdout

    def test_template_file(self, runner, tmp_path):
        template_file = tmp_path / "template.cfg"
        result = runner.invoke(application, ["template", "--file", str(template_file)])
        assert result.exit_code == 0
        loaded = RunConfig.from_filepath(template_file)
        assert loaded.model_dump() == RunConfig.template().model_dump()

    def test_template_yaml(self, runner, tmp_path):
        template_file = tmp_path / "template.yaml"
        result = runner.invoke(application, ["template", "--file", str(template_file)])
        assert result.exit_code == 0
        assert "rates:\n  - 3\n" in template_file.read_text()
