"""Equilibrium multiplicity on wheels as holdings cross the cost threshold a*D."""

from creditfreeze.clearing import best_equilibrium, worst_equilibrium
from creditfreeze.corpus import WHEEL_RATES, WHEEL_SIZES, wheel, wheel_grid


def main():
    for n in WHEEL_SIZES:
        for a in WHEEL_RATES:
            marks = []
            for p in wheel_grid(a):
                net = wheel(n, a, p)
                multiple = best_equilibrium(net).values != worst_equilibrium(net).values
                marks.append(f"{p}:{'multi' if multiple else 'unique'}")
            print(f"n={n} a={a}  " + "  ".join(marks))


if __name__ == "__main__":
    main()
