from .base import BackendSuite, PipelineConfig
from .mock import mock_suite
from .remote import RemoteEndpointConfig, remote_suite

__all__ = ["BackendSuite", "PipelineConfig", "mock_suite", "remote_suite", "RemoteEndpointConfig"]
