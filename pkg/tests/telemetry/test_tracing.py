import importlib

from src.config import Settings

tracing = importlib.import_module("src.telemetry.tracing")


def test_instrumentation_settings(monkeypatch):
    monkeypatch.setattr(tracing, "_provider", None)
    monkeypatch.setattr(tracing.trace, "set_tracer_provider", lambda provider: None)

    provider = tracing.instrumentation(Settings(service_name="novikov-test"))

    assert provider.resource.attributes.get("service.name") == "novikov-test"


def test_instrumentation_is_installed_once(monkeypatch):
    monkeypatch.setattr(tracing, "_provider", None)
    monkeypatch.setattr(tracing.trace, "set_tracer_provider", lambda provider: None)

    first = tracing.instrumentation(Settings())
    second = tracing.instrumentation(Settings(service_name="other"))

    assert first is second
