"""Chat-completions client for an OpenAI-compatible endpoint.

One request, no streaming: POST {endpoint}/v1/chat/completions with the
system and user messages, read the first choice's content.  The API key is
taken from the SOLVECHART_API_KEY environment variable unless the config
carries one explicitly.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum

import requests

from ..errors import SolveChartError
from .prompt import PromptBundle

__all__ = ["API_KEY_ENV", "LlmConfig", "LlmError", "LlmErrorKind", "chat_completion"]

API_KEY_ENV = "SOLVECHART_API_KEY"
DEFAULT_MODEL = "Qwen2-7B-Instruct"
DEFAULT_TIMEOUT_S = 120.0


class LlmErrorKind(Enum):
    TRANSPORT = "transport"
    BAD_RESPONSE = "bad-response"


class LlmError(SolveChartError):
    def __init__(self, kind: LlmErrorKind, message: str) -> None:
        super().__init__(f"{kind.value}: {message}")
        self.kind = kind
        self.reason = message


@dataclass(frozen=True)
class LlmConfig:
    endpoint: str
    model: str = DEFAULT_MODEL
    temperature: float = 0.0
    max_tokens: int = 512
    api_key: str | None = None  # falls back to the environment
    timeout_s: float = DEFAULT_TIMEOUT_S

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError("temperature must be non-negative")

    def resolved_key(self) -> str | None:
        if self.api_key is not None:
            return self.api_key
        return os.environ.get(API_KEY_ENV)


def chat_completion(config: LlmConfig, bundle: PromptBundle) -> str:
    """Sends one prompt bundle and returns the model's reply text."""
    url = config.endpoint.rstrip("/") + "/v1/chat/completions"
    headers = {"Content-Type": "application/json"}
    key = config.resolved_key()
    if key:
        headers["Authorization"] = f"Bearer {key}"
    payload = {
        "model": config.model,
        "messages": [
            {"role": "system", "content": bundle.system},
            {"role": "user", "content": bundle.user},
        ],
        "temperature": config.temperature,
        "max_tokens": config.max_tokens,
    }
    try:
        response = requests.post(url, json=payload, headers=headers, timeout=config.timeout_s)
    except requests.RequestException as err:
        raise LlmError(LlmErrorKind.TRANSPORT, f"cannot reach model endpoint {url}: {err}") from err
    if response.status_code != 200:
        raise LlmError(LlmErrorKind.TRANSPORT, f"model endpoint returned HTTP {response.status_code}")
    try:
        body = response.json()
        content = body["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError) as err:
        raise LlmError(LlmErrorKind.BAD_RESPONSE, f"unexpected completion shape: {err}") from err
    if not isinstance(content, str):
        raise LlmError(LlmErrorKind.BAD_RESPONSE, "completion content is not text")
    return content
