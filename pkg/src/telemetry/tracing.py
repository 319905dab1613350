from opentelemetry import trace
from opentelemetry.exporter.otlp.proto.grpc.trace_exporter import OTLPSpanExporter
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor

from src.config import Settings, load_settings

_provider: TracerProvider | None = None


def instrumentation(settings: Settings | None = None) -> TracerProvider:
    """Install the process tracer provider once; export spans only when an endpoint is configured."""
    global _provider
    if _provider is not None:
        return _provider
    settings = settings or load_settings()
    resource = Resource.create({"service.name": settings.service_name})
    tracer_provider = TracerProvider(resource=resource)
    if settings.otlp_endpoint:
        otlp_exporter = OTLPSpanExporter(endpoint=settings.otlp_endpoint, insecure=True)
        tracer_provider.add_span_processor(BatchSpanProcessor(otlp_exporter))
    trace.set_tracer_provider(tracer_provider)
    _provider = tracer_provider
    return tracer_provider
