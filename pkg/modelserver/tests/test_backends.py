import pytest
import requests

from modelserver.backends import (HashEmbedder, LeadGenerator, make_embedder,
                                  make_generator, split_context_sentences)
from modelserver.config import ServerConfig

from conftest import RunningServer


def test_factories_parse_specs():
    assert make_embedder("hash:32").dims == 32
    assert make_embedder("hash:").dims == 384
    assert make_generator("lead:3").lead_n == 3
    assert make_embedder("st:some/model").identifier == "st:some/model"
    assert make_generator("hf:some/model").identifier == "hf:some/model"
    with pytest.raises(ValueError):
        make_embedder("word2vec:300")
    with pytest.raises(ValueError):
        make_generator("rnn:small")
    with pytest.raises(ValueError):
        make_embedder("st:")


def test_config_validation():
    with pytest.raises(ValueError):
        ServerConfig(max_batch=0)
    with pytest.raises(ValueError):
        ServerConfig(max_text_chars=0)


def test_hash_embedder_deterministic_and_normalized():
    emb = HashEmbedder(dims=16)
    a, b = emb.embed(["same text", "same text"])
    assert a == b
    assert abs(sum(x * x for x in a) - 1.0) < 1e-9


def test_lead_generator_beam_takes_lead_sentences():
    gen = LeadGenerator(2)
    text, truncated = gen.generate(None, "One here. Two here. Three here.",
                                   "article", "beam", {"beams": 5}, 0, 1000)
    assert text == "One here. Two here."
    assert truncated is False


def test_lead_generator_truncates_long_context():
    gen = LeadGenerator(2)
    context = " ".join(f"w{i}" for i in range(50)) + "."
    text, truncated = gen.generate(None, context, "article", "beam", {}, 0, 10)
    assert truncated is True
    assert text


def test_lead_generator_sampling_seed_sensitivity():
    gen = LeadGenerator(1)
    context = ". ".join(f"Sentence number {i} here" for i in range(12)) + "."
    same_a, _ = gen.generate(None, context, "article", "nucleus", {"p": 0.9}, 1, 1000)
    same_b, _ = gen.generate(None, context, "article", "nucleus", {"p": 0.9}, 1, 1000)
    assert same_a == same_b
    outputs = {gen.generate(None, context, "article", "nucleus", {"p": 0.9}, s, 1000)[0]
               for s in range(12)}
    assert len(outputs) > 1  # different seeds explore different picks


def test_split_context_sentences():
    assert split_context_sentences("A one. B two! C three?") == \
        ["A one.", "B two!", "C three?"]
    assert split_context_sentences("") == []


def test_unloadable_checkpoint_returns_503(monkeypatch):
    monkeypatch.setenv("HF_HUB_OFFLINE", "1")  # fail fast, no hub retries
    config = ServerConfig(embedding_model="st:nonexistent/never-a-model",
                          generation_model="hf:nonexistent/never-a-model")
    server = RunningServer(config).start()
    try:
        resp = requests.post(f"{server.endpoint}/embed", json={"texts": ["x"]},
                             timeout=60)
        assert resp.status_code == 503
        gen = requests.post(f"{server.endpoint}/generate", json={
            "claim": None, "context": "x", "mode": "article",
            "decoding": {"strategy": "beam", "params": {}}, "seed": 0}, timeout=60)
        assert gen.status_code == 503
    finally:
        server.stop()
