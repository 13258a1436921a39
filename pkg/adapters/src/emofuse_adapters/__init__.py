"""Reference adapters that produce emofuse input files from session videos.

The engine never imports this package; the CSV formats are the whole
contract between them.
"""

from .config import AdapterConfig, AdapterError
from .fer import run_fer_adapter
from .speech import Word, assemble_sentences, run_speech_adapter

__all__ = [
    "AdapterConfig",
    "AdapterError",
    "Word",
    "assemble_sentences",
    "run_fer_adapter",
    "run_speech_adapter",
]

__version__ = "0.1.0"
