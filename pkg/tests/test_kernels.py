import os
import subprocess
import sys

import numpy as np

from profmack import _kernels as K


def brute_closure(mult, seed):
    members = set(seed)
    changed = True
    while changed:
        changed = False
        for a in list(members):
            for b in list(members):
                for c in (mult[a][b], mult[b][a]):
                    if c not in members:
                        members.add(c)
                        changed = True
    return sorted(members)


def cyclic_table(n):
    i = np.arange(n)
    return (i[:, None] + i[None, :]) % n


def test_closure_cyclic():
    mult = cyclic_table(12)
    out = K.closure(mult, [4])
    assert list(out) == [0, 4, 8]
    out = K.closure(mult, [3, 4])
    assert list(out) == list(range(12))


def test_closure_matches_brute_force():
    rng = np.random.default_rng(5)
    for n in (6, 8, 15):
        mult = cyclic_table(n)
        for _ in range(5):
            seed = list(rng.integers(0, n, size=2))
            assert list(K.closure(mult, seed)) == brute_closure(mult.tolist(), seed)


def test_orbit_labels():
    # two 3-cycles on 6 points
    perm = [1, 2, 0, 4, 5, 3]
    lab = K.orbit_labels([perm], 6)
    assert lab[0] == lab[1] == lab[2]
    assert lab[3] == lab[4] == lab[5]
    assert lab[0] != lab[3]


def test_orbit_labels_no_perms():
    lab = K.orbit_labels([], 4)
    assert list(lab) == [0, 1, 2, 3]


def test_fallback_flag_gives_same_answers():
    code = (
        "import numpy as np\n"
        "from profmack import _kernels as K\n"
        "assert not K.HAVE_NUMBA\n"
        "i = np.arange(10)\n"
        "mult = (i[:, None] + i[None, :]) % 10\n"
        "print([int(x) for x in K.closure(mult, [2])])\n"
    )
    env = dict(os.environ, PROFMACK_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "[0, 2, 4, 6, 8]"
