# Copyright 2026 The qec5 Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Independent reference computations for the frozen test data.

Written without the C++ sources: plain lists of bits, the three gates as
row operations, brute force everywhere. Run with python3; stdlib only.
"""

M1 = """1000101000 1100100001 0001000001 0011101001 0000100000
        0101010001 0000001000 1101100100 0000000001 1010100010"""
MBS = """1010100000 0101010000 0010100000 0111100001 1010001000
         1011011000 0000001000 0001010101 0010101010 0010101011"""
NAMES = {"00": "I", "01": "X", "10": "Z", "11": "Y"}


def rows(text):
    return tuple(int(r, 2) for r in text.split())


def bit(word, pos):
    return (word >> (10 - pos)) & 1


def syndrome(i):
    e = [0] * 10
    if i:
        k, kind = (i + 2) // 3, i - 3 * ((i + 2) // 3 - 1)
        e[2 * k - 2] = int(kind != 2)
        e[2 * k - 1] = int(kind != 1)
    return e


def multiply(m, e):
    return [sum(bit(m[r], c + 1) & e[c] for c in range(10)) % 2 for r in range(10)]


def table(m):
    out = []
    for i in range(16):
        w = multiply(m, syndrome(i))
        pairs = " ".join(f"{w[2 * p]}{w[2 * p + 1]}" for p in range(5))
        v = "".join(str(w[j]) for j in (3, 5, 7, 9))
        out.append((i, pairs, v, NAMES[f"{w[0]}{w[1]}"]))
    return out


def gate(state, g):
    r = list(state)
    if g[0] == "BY":
        x = 2 * g[1] - 2
        r[x], r[x + 1] = r[x + 1], r[x]
    elif g[0] == "SXBX":
        x = 2 * g[1] - 2
        r[x + 1] ^= r[x]
    else:
        s, t = g[1], g[2]
        r[2 * s - 2] ^= r[2 * t - 2]
        r[2 * t - 1] ^= r[2 * s - 1]
    return tuple(r)


GATES = ([("BY", p) for p in range(1, 6)] + [("SXBX", p) for p in range(1, 6)] +
         [("BXOR", s, t) for s in range(1, 6) for t in range(1, 6) if s != t])


def ball(center, radius):
    seen, frontier = {center}, [center]
    for _ in range(radius):
        nxt = []
        for s in frontier:
            for g in GATES:
                u = gate(s, g)
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return seen


if __name__ == "__main__":
    for name, m in (("six-cnot", rows(M1)), ("braunstein-smolin", rows(MBS))):
        print(name)
        for row in table(m):
            print(*row)
        print("distinct v:", len({r[2] for r in table(m)}))
    identity = tuple(1 << (9 - r) for r in range(10))
    meet = ball(rows(M1), 4) & ball(identity, 5)
    print("circuits of <= 9 basic gates realizing six-cnot:", len(meet))
