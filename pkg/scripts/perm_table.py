"""Print the one-cycle minimum-inversion table for k = 2..10 as Markdown."""
import time

from arnoldbif.oracle import brute_force_min_connection
from arnoldbif.perms import min_inversion_stats


def main() -> None:
    print("| k | min inversion | minimizers | oracle | seconds |")
    print("|---|---|---|---|---|")
    for k in range(2, 11):
        t = time.perf_counter()
        s = min_inversion_stats(k)
        agree = brute_force_min_connection(k) == s if k <= 8 else "n/a"
        print(f"| {k} | {s['min_value']} | {s['count_minimizers']} | {agree} | {time.perf_counter() - t:.3f} |")


if __name__ == "__main__":
    main()
