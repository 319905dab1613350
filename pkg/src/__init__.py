from .app import VerificationService, create_app, main, run

__all__ = [
    "VerificationService",
    "create_app",
    "main",
    "run",
]
