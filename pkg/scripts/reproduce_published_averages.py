#!/usr/bin/env python3
"""Reproduce the benchmark Average columns from per-cell values.

Objective rows: Average = count-weighted micro-average of the ten cell
accuracies (weights are the question counts per subject/answer-type).
Subjective rows: Average = plain mean of the three dimension means.

Prints one line per model with the reproduction error. One objective row
and three subjective rows exceed the reproduction tolerances; the printed
cells of those rows are internally inconsistent (see notes in the tests).
"""

from __future__ import annotations

from lexkit.judge import dimension_average
from lexkit.mcq import micro_average

COUNTS = [537, 463, 118, 276, 197, 120, 320, 87, 170, 275]

OBJECTIVE_ROWS = [
    ("ChatGLM", [31.66, 1.08, 27.97, 2.90, 37.06, 13.33, 39.69, 20.69, 37.65, 42.91], 24.66),
    ("Baichuan-Chat", [31.47, 10.15, 29.66, 8.70, 35.53, 19.17, 50.0, 27.59, 53.12, 53.45], 30.78),
    ("Chinese-alpaca2", [25.7, 10.15, 30.51, 11.59, 32.99, 19.17, 40.94, 21.84, 44.12, 43.27], 26.73),
    ("GPT-3.5-turbo", [36.5, 10.58, 37.29, 17.03, 42.13, 21.67, 51.25, 28.74, 53.53, 54.18], 34.10),
    ("LexiLaw", [20.11, 7.56, 23.73, 10.14, 24.87, 19.17, 31.56, 16.09, 31.76, 40.36], 21.50),
    ("LawGPT", [22.91, 6.26, 31.36, 7.61, 25.38, 16.67, 30.31, 13.79, 34.71, 29.09], 20.60),
    ("Lawyer-LLaMA", [35.75, 5.62, 32.20, 6.52, 29.95, 13.33, 32.50, 14.94, 39.41, 39.64], 25.05),
    ("ChatLaw", [27.56, 7.99, 31.36, 9.42, 35.53, 11.67, 35.62, 17.24, 42.35, 41.09], 25.20),
    ("DISC-LawLLM", [42.09, 19.87, 40.68, 18.48, 39.59, 19.17, 50.94, 25.29, 57.06, 54.91], 37.10),
]

SUBJECTIVE_ROWS = [
    ("ChatGLM", 2.64, 2.75, 3.23, 2.87),
    ("Baichuan-Chat", 3.22, 3.34, 3.18, 3.25),
    ("Chinese-Alpaca2", 3.13, 3.23, 3.17, 3.17),
    ("LexiLaw", 3.06, 2.62, 3.00, 2.90),
    ("LaWGPT", 3.02, 2.58, 2.96, 2.86),
    ("Lawyer-LLaMa", 3.13, 2.83, 3.35, 3.10),
    ("ChatLaw", 3.31, 2.90, 3.35, 3.19),
    ("DISC-LawLLM", 3.46, 3.12, 3.59, 3.39),
]


def main() -> None:
    print("objective Average reproduction (count-weighted micro-average, tolerance ±0.01)")
    for name, cells, published in OBJECTIVE_ROWS:
        computed = micro_average(zip(cells, COUNTS))
        flag = "ok" if abs(computed - published) <= 0.01 else "MISMATCH"
        print(f"  {name:16s} computed {computed:7.4f}  published {published:5.2f}  "
              f"diff {abs(computed - published):6.4f}  {flag}")

    print("\nsubjective Average reproduction (mean of dimension means, tolerance ±0.005)")
    for name, acc, cpl, clr, published in SUBJECTIVE_ROWS:
        computed = dimension_average(acc, cpl, clr)
        flag = "ok" if abs(computed - published) <= 0.005 else "MISMATCH"
        print(f"  {name:16s} computed {computed:7.4f}  published {published:5.2f}  "
              f"diff {abs(computed - published):6.4f}  {flag}")


if __name__ == "__main__":
    main()
