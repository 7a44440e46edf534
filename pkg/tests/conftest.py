import random
import sys


def height_oracle(D, N):
    """Independent simulator on heights: column i topples when
    h[i] - h[i+1] >= D and sends one grain to each of i+1 .. i+D-1."""
    h = [N]
    while True:
        h.extend([0] * (D + 1))
        moved = False
        for i in range(len(h) - D):
            if h[i] - h[i + 1] >= D:
                h[i] -= D - 1
                for j in range(i + 1, i + D):
                    h[j] += 1
                moved = True
                break
        if not moved:
            break
    while h and h[-1] == 0:
        h.pop()
    return [h[i] - (h[i + 1] if i + 1 < len(h) else 0) for i in range(len(h))]


def rand_slopes(seed, n=8, hi=7):
    rng = random.Random(seed)
    return [rng.randint(0, hi) for _ in range(rng.randint(0, n))]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
