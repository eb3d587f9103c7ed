"""Token vocabulary shared by the decoder, the models and the metrics."""

from typing import Iterable, Tuple

# Reserved surface forms
EOS = "</s>"
PAD = "<pad>"

SENTINELS = frozenset({EOS, PAD})

# A sentence is an immutable sequence of token strings
Sentence = Tuple[str, ...]


class TokenError(ValueError):
    """Raised when a token or sentence breaks the vocabulary rules."""


def check_token(text: str, allow_sentinels: bool = False) -> str:
    """
    Validate a single token.

    Args:
        text: Token surface form
        allow_sentinels: Whether EOS/PAD are acceptable here

    Returns:
        The token unchanged
    """
    if not isinstance(text, str) or not text:
        raise TokenError(f"Token must be a non-empty string, got {text!r}")
    if any(ch.isspace() for ch in text):
        raise TokenError(f"Token contains whitespace: {text!r}")
    if not allow_sentinels and text in SENTINELS:
        raise TokenError(f"Reserved token used as a word: {text!r}")
    return text


def make_sentence(tokens: Iterable[str], allow_eos: bool = True) -> Sentence:
    """
    Build a Sentence, checking every token.

    EOS is accepted only as the final element (and only when allow_eos is set).
    """
    sentence = tuple(tokens)
    for i, token in enumerate(sentence):
        if token == EOS:
            if not allow_eos or i != len(sentence) - 1:
                raise TokenError(f"EOS may only end a sentence (position {i + 1})")
            continue
        check_token(token)
    return sentence


def is_complete(source_prefix: Sentence) -> bool:
    """True when the prefix carries the end-of-source marker."""
    return len(source_prefix) > 0 and source_prefix[-1] == EOS


def strip_eos(sentence: Sentence) -> Sentence:
    """Drop a trailing EOS if present."""
    return sentence[:-1] if is_complete(sentence) else sentence


def split_line(line: str) -> Sentence:
    """Whitespace-tokenize one corpus line."""
    return make_sentence(line.split(), allow_eos=False)
