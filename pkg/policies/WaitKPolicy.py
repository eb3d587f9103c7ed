"""Wait-k: read k source tokens, then alternate one write per read."""

from .DecodingPolicy import READ, WRITE, DecodingPolicy, PolicyDecision, PolicyState


class WaitKPolicy(DecodingPolicy):
    """Fixed-latency policy with g(t) = min(k + t - 1, |x|)."""

    name = "wait_k"

    def __init__(self, k: int):
        """
        Initialize wait-k.

        Args:
            k: Source tokens read before the first write (>= 1)
        """
        if int(k) != k or k < 1:
            raise ValueError(f"k must be an integer >= 1, got {k}")
        self.k = int(k)

    @property
    def setting(self) -> int:
        return self.k

    def g_of(self, t: int, source_len: int) -> int:
        """Source tokens read when target token t is written."""
        if t < 1:
            raise ValueError(f"t must be >= 1, got {t}")
        return min(self.k + t - 1, source_len)

    def _decide(self, state: PolicyState) -> PolicyDecision:
        # Next write is token t+1, which needs g(t+1) source tokens
        needed = min(self.k + state.committed_len, state.source_len)
        return WRITE if state.source_read >= needed else READ


def g_of(policy: WaitKPolicy, t: int, source_len: int) -> int:
    return policy.g_of(t, source_len)
