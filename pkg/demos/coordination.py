"""Two friends guessing each other's guesses end up at the most likely place."""
from fractions import Fraction

from chancalc import coord_agent, make_space, make_subdist, power_state

places = make_space("Place", ["cafe", "park", "pub"])
loc = make_subdist(places, {"cafe": Fraction(1, 5), "park": Fraction(1, 2), "pub": Fraction(3, 10)})

for n in (0, 1, 2, 5, 20):
    bob = coord_agent(loc, "bob", n)
    assert bob == power_state(loc, 2 * n + 1)
    print(f"bob({n:2d}):", "  ".join(f"{k[0]}={float(v):.6f}" for k, v in bob.items()))
