"""Enumerate periodic orbits and the slopes at which they first appear.

Each cycle of period n lives in a cell of the n-fold map where the
composition is affine, so its points solve a linear equation per branch
word.  Aperiodic branch words up to rotation (Lyndon words) give one
representative per cycle.  At the full slope h = 2 the census matches the
classical count of binary necklaces; below each onset threshold the
corresponding period is simply absent.
"""

from fractions import Fraction

from tentlab import MapParams, Rational, enumerate_cycles, onset_threshold


def main() -> None:
    rat = MapParams.parse("3/2", Rational())
    for period in (1, 2, 3):
        found = enumerate_cycles(rat, period)
        names = [
            "(" + ", ".join(str(x) for x in c.points) + f") {c.itinerary}"
            for c in found
        ]
        print(f"h = 3/2, period {period}: {names or 'none'}")

    print()
    full = MapParams.parse("2", Rational())
    census = [len(enumerate_cycles(full, n)) for n in range(1, 9)]
    print("h = 2 census for periods 1..8:", census)

    print()
    for period in (3, 5, 7, 6):
        record = onset_threshold(period)
        poly = " ".join(str(c) for c in record.polynomial)
        print(
            f"period {period} first appears at h = {record.threshold:.12f}"
            f"  (root of coefficients {poly})"
        )

    just_below = MapParams(Fraction(1618, 1001), Rational())
    just_above = MapParams(Fraction(1619, 1000), Rational())
    print()
    print(f"three-cycles just below phi: {len(enumerate_cycles(just_below, 3))}")
    print(f"three-cycles just above phi: {len(enumerate_cycles(just_above, 3))}")


if __name__ == "__main__":
    main()
