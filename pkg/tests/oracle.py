"""Direct digit-string reference maps, independent of the run-word engine.

Only plain strings and ``re`` are used here so the engine can be checked
against something that shares none of its code.
"""

import re

_RUN = re.compile(r"(\d)\1*")


def lsb(s):
    return _RUN.sub(lambda m: str(max(len(m.group()), int(m.group(1)))) + m.group(1), s)


def ls(s):
    return _RUN.sub(lambda m: str(len(m.group())) + m.group(1), s)


def lsa(s):
    return _RUN.sub(lambda m: 2 * str(len(m.group())) + 2 * m.group(1), s)


def orbit(s, limit=10_000):
    """Return (mu, period, cycle) by recording every visited string."""
    seen = {}
    chain = []
    while s not in seen:
        if len(chain) > limit:
            raise RuntimeError("no repeat within limit")
        seen[s] = len(chain)
        chain.append(s)
        s = lsb(s)
    mu = seen[s]
    cycle = chain[mu:]
    return mu, len(cycle), cycle
