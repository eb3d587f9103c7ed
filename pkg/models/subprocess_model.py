"""
Incremental model served by an external process.

Wire protocol (newline-delimited JSON over the child's stdin/stdout):
    request  {"src": [...], "tgt": [...], "top_k": K}
    reply    {"tokens": [...], "logprobs": [...]}   (equal-length arrays)
    error    {"error": "message"}
One reply per request, in order.
"""

import json
import logging
import queue
import shlex
import subprocess
import threading
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple, Union

from trace_core import EOS, Sentence

from .distribution import Distribution
from .incremental_model import IncrementalModel, ModelError, ModelTimeoutError, ProtocolError, UnknownTokenError

logger = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 10.0
DEFAULT_TOP_K = 10

_EOF = object()


class SubprocessModel(IncrementalModel):
    """Adapter that forwards scoring requests to a child process."""

    def __init__(
        self,
        command: Union[str, Sequence[str]],
        top_k: int = DEFAULT_TOP_K,
        timeout: float = DEFAULT_TIMEOUT,
        vocabulary: Optional[Iterable[str]] = None
    ):
        """
        Start the child process.

        Args:
            command: Command line (string is split with shlex)
            top_k: Number of candidates requested per call
            timeout: Seconds to wait for each reply
            vocabulary: Target vocabulary, if known in advance
        """
        if top_k < 1:
            raise ValueError(f"top_k must be >= 1, got {top_k}")
        self.command = shlex.split(command) if isinstance(command, str) else list(command)
        self.top_k = top_k
        self.timeout = timeout
        self._vocabulary = frozenset(vocabulary or ())
        self._cache: Dict[Tuple[Sentence, Sentence], Distribution] = {}
        self._lock = threading.Lock()
        self.requests_sent = 0

        logger.info(f"Starting model process: {' '.join(self.command)}")
        try:
            self.proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE
            )
        except OSError as e:
            raise ModelError(f"Cannot start model process {self.command!r}: {e}") from e

        self._replies: "queue.Queue" = queue.Queue()
        self._reader = threading.Thread(target=self._read_stdout, daemon=True)
        self._reader.start()
        self._stderr_reader = threading.Thread(target=self._drain_stderr, daemon=True)
        self._stderr_reader.start()

    def _read_stdout(self):
        # Raw bytes; decoding happens in _request so bad UTF-8 surfaces as a protocol error
        try:
            for line in self.proc.stdout:
                line = line.strip()
                if line:
                    self._replies.put(line)
        finally:
            self._replies.put(_EOF)

    def _drain_stderr(self):
        for line in self.proc.stderr:
            line = line.decode("utf-8", errors="replace").rstrip()
            if line:
                logger.warning(f"model stderr: {line}")

    @property
    def vocabulary(self) -> FrozenSet[str]:
        return self._vocabulary

    def next_distribution(self, source_prefix: Sentence, target_prefix: Sentence) -> Distribution:
        key = (tuple(source_prefix), tuple(target_prefix))
        with self._lock:
            cached = self._cache.get(key)
            if cached is not None:
                return cached
            reply = self._request({"src": list(key[0]), "tgt": list(key[1]), "top_k": self.top_k})
            distribution = self._parse_reply(reply)
            self._cache[key] = distribution
            self._vocabulary = self._vocabulary | {t for t in distribution.tokens if t != EOS}
            return distribution

    def _request(self, payload: Dict) -> Dict:
        if self.proc.poll() is not None:
            raise ModelError(f"Model process exited with code {self.proc.returncode}")
        try:
            self.proc.stdin.write((json.dumps(payload, ensure_ascii=False) + "\n").encode("utf-8"))
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError) as e:
            raise ModelError(f"Model process is gone: {e}") from e
        self.requests_sent += 1

        try:
            line = self._replies.get(timeout=self.timeout)
        except queue.Empty:
            # A late reply would desynchronize the channel
            self.proc.kill()
            raise ModelTimeoutError(f"No reply within {self.timeout}s") from None
        if line is _EOF:
            self.proc.wait(timeout=self.timeout)
            raise ModelError(f"Model process exited with code {self.proc.returncode}")
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ProtocolError(f"Reply is not valid UTF-8: {line[:80]!r}") from e
        try:
            reply = json.loads(line)
        except json.JSONDecodeError as e:
            raise ProtocolError(f"Reply is not JSON: {line[:80]!r}") from e
        if not isinstance(reply, dict):
            raise ProtocolError("Reply must be a JSON object")
        return reply

    @staticmethod
    def _parse_reply(reply: Dict) -> Distribution:
        if "error" in reply:
            message = str(reply["error"])
            token = reply.get("token")
            if token is not None:
                raise UnknownTokenError(token)
            raise ModelError(f"Model reported an error: {message}")
        tokens = reply.get("tokens")
        logprobs = reply.get("logprobs")
        if not isinstance(tokens, list) or not isinstance(logprobs, list):
            raise ProtocolError("Reply needs 'tokens' and 'logprobs' arrays")
        if len(tokens) != len(logprobs):
            raise ProtocolError(
                f"Mismatched array lengths: {len(tokens)} tokens, {len(logprobs)} logprobs"
            )
        if not tokens:
            raise ProtocolError("Reply has no candidates")
        if not all(isinstance(t, str) and t for t in tokens):
            raise ProtocolError("Tokens must be non-empty strings")
        if not all(isinstance(lp, (int, float)) and not isinstance(lp, bool) for lp in logprobs):
            raise ProtocolError("Log-probabilities must be numbers")
        try:
            return Distribution.from_logprobs(tokens, logprobs)
        except ValueError as e:
            raise ProtocolError(str(e)) from e

    def close(self):
        if self.proc.poll() is None:
            try:
                self.proc.stdin.close()
                self.proc.wait(timeout=self.timeout)
            except (OSError, subprocess.TimeoutExpired):
                self.proc.kill()
                self.proc.wait()
        logger.debug(f"Model process closed after {self.requests_sent} requests")


def subprocess_model(command: Union[str, Sequence[str]], **kwargs) -> SubprocessModel:
    """Start `command` and wrap it as an IncrementalModel."""
    if isinstance(command, str) and not command.strip():
        raise ValueError("Empty model command")
    return SubprocessModel(command, **kwargs)
