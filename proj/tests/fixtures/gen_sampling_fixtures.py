"""Independent reimplementation of the sampler used to freeze golden counts.

Writes sampling_fixtures.json next to this script.
"""
import json
import pathlib

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z):
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def derive(seed, index):
    return mix64((seed + GOLDEN * (index + 1)) & MASK)


class Stream:
    def __init__(self, seed):
        self.state = seed

    def next(self):
        self.state = (self.state + GOLDEN) & MASK
        return mix64(self.state)

    def uniform(self):
        return (self.next() >> 11) * 2.0 ** -53


def draw(row, u):
    acc = 0.0
    last = 0
    for i, p in enumerate(row):
        if p <= 0.0:
            continue
        acc += p
        last = i
        if u < acc:
            return i
    return last


def counts(rows, n, seed):
    out = []
    for s, actions in enumerate(rows):
        per_state = []
        for a, row in enumerate(actions):
            rng = Stream(derive(derive(seed, s), a))
            c = [0] * len(row)
            for _ in range(n):
                c[draw(row, rng.uniform())] += 1
            per_state.append(c)
        out.append(per_state)
    return out


def main():
    stream = Stream(0)
    first = [stream.next() for _ in range(3)]
    cases = [
        {"name": "half_half", "seed": 42, "n": 100000,
         "rows": [[[0.5, 0.5]], [[0.5, 0.5]]]},
        {"name": "three_way", "seed": 7, "n": 1000,
         "rows": [[[0.2, 0.3, 0.5], [0.0, 1.0, 0.0]], [[0.1, 0.0, 0.9]], [[0.0, 0.0, 1.0]]]},
    ]
    for c in cases:
        c["counts"] = counts(c["rows"], c["n"], c["seed"])
    doc = {
        "splitmix_seed0": [str(x) for x in first],
        "derive_42_0": str(derive(42, 0)),
        "cases": cases,
    }
    path = pathlib.Path(__file__).with_name("sampling_fixtures.json")
    path.write_text(json.dumps(doc, indent=1) + "\n")


if __name__ == "__main__":
    main()
