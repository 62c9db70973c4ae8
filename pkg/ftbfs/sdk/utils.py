import json
import math
import toml
from pathlib import Path
from typing import Any, List

MASK64 = (1 << 64) - 1


class SplitMix64:
    """64-bit SplitMix generator.

    Reference sequence for seed 0 starts 0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4.
    Used for every randomized step so corpora are reproducible across languages.
    """

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        # 53 high bits -> [0, 1)
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, bound: int) -> int:
        if bound <= 0: raise ValueError(f"bound must be positive, got {bound}")
        return self.next_u64() % bound

    def sample(self, population: int, count: int) -> List[int]:
        """Sorted sample of `count` distinct indices from range(population)."""
        count = min(count, population)
        pool = list(range(population))
        for i in range(count):
            j = i + self.below(population - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:count])


def ceil_root(num: int, k: int, den: int = 1) -> int:
    """Smallest integer r >= 0 with r**k * den >= num, i.e. ceil((num/den)**(1/k))."""
    if num <= 0: return 0
    r = max(0, int(math.floor((num / den) ** (1.0 / k))) - 1)
    while r > 0 and (r - 1) ** k * den >= num:
        r -= 1
    while r ** k * den < num:
        r += 1
    return r


def ceil_power(num: int, p: int, q: int, den: int = 1) -> int:
    """ceil((num/den) ** (p/q)) computed exactly."""
    return ceil_root(num ** p, q, den ** p)


def load_toml(path: Path) -> dict:
    if not path.exists(): return {}
    with open(path, "r") as f: return toml.load(f)


def dump_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False)


def save_json(path: Path, data: Any):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f: f.write(dump_json(data) + "\n")


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"Expected a comma-separated list of integers, got '{text}'")
