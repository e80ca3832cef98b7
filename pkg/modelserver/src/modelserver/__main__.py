"""Run the reference server: python -m modelserver [--port N] [...]"""

from __future__ import annotations

import argparse

import uvicorn

from .app import create_app
from .config import DEFAULT_EMBEDDING, DEFAULT_GENERATION, ServerConfig


def main() -> int:
    parser = argparse.ArgumentParser(prog="modelserver", description=__doc__)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8080)
    parser.add_argument("--embedding-model", default=DEFAULT_EMBEDDING,
                        help="st:<checkpoint> or hash:<dims>")
    parser.add_argument("--generation-model", default=DEFAULT_GENERATION,
                        help="hf:<checkpoint> or lead:<n>")
    parser.add_argument("--max-batch", type=int, default=32)
    parser.add_argument("--device", default="cpu")
    args = parser.parse_args()
    config = ServerConfig(host=args.host, port=args.port,
                          embedding_model=args.embedding_model,
                          generation_model=args.generation_model,
                          max_batch=args.max_batch, device=args.device)
    uvicorn.run(create_app(config), host=config.host, port=config.port,
                log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
