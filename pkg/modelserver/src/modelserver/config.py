"""Server configuration.

Model identifiers select the backend implementation by prefix:

  embedding:  "st:<huggingface model>"  sentence-transformers checkpoint
              "hash:<dims>"             hermetic hashed-bag embedder (CI/dev)
  generation: "hf:<huggingface model>"  transformers seq2seq checkpoint
              "lead:<n>"                hermetic lead-n sentence baseline

The hermetic backends keep the full wire contract (determinism, truncation
flags, strategy handling) without downloading weights, so the protocol is
testable offline; the st:/hf: backends are the reference configuration.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_EMBEDDING = "st:sentence-transformers/all-MiniLM-L6-v2"
DEFAULT_GENERATION = "hf:sshleifer/distilbart-cnn-12-6"


@dataclass(frozen=True)
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    embedding_model: str = DEFAULT_EMBEDDING
    generation_model: str = DEFAULT_GENERATION
    max_batch: int = 32
    device: str = "cpu"
    # /embed rejects any single text longer than this (413)
    max_text_chars: int = 20000
    # generation context cap for the hermetic backend, in whitespace words;
    # hf backends use their tokenizer's own model_max_length instead
    max_context_words: int = 1024

    def __post_init__(self):
        if self.max_batch < 1:
            raise ValueError(f"max_batch must be >= 1, got {self.max_batch}")
        if self.max_text_chars < 1:
            raise ValueError("max_text_chars must be positive")
        if self.max_context_words < 1:
            raise ValueError("max_context_words must be positive")
