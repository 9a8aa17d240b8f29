#!/usr/bin/env python3
"""Brushing-and-linking walkthrough on the energy dataset.

Two views are computed from one table; clicking elements of the bar view
links to the scatter view through the shared rows.
"""

import json

from galdep.engine import open_demo
from galdep.paths import parse_selection_doc


def describe_rows(table_enc):
    i = 1
    while table_enc["k"] == "cons":
        row = table_enc["head"]
        fields = {name: cell for name, cell in row["fields"]}
        marks = [name for name, cell in row["fields"] if cell.get("ann")]
        label = fields["country"]["v"]
        if marks:
            print(f"  row {i} ({label}): linked through {', '.join(marks)}")
        table_enc = table_enc["tail"]
        i += 1


def main() -> None:
    session = open_demo("energy-pair")
    bars = session.view("bars").result
    n_bars = 0
    cursor = bars
    while cursor.__class__.__name__ == "VCons":
        n_bars += 1
        cursor = cursor.tail

    for index in range(1, n_bars + 1):
        doc = parse_selection_doc([{"index": index}, {"field": "height"}])
        res = session.link(doc, from_view="bars")
        print(f"click bar {index} (its height):")
        describe_rows(res["data"]["table"])
        linked = [json.dumps(p["path"]) for p in res["other_doc"]["paths"]]
        print(f"  {len(linked)} linked positions in the points view:")
        for p in linked:
            print(f"    {p}")
        print()


if __name__ == "__main__":
    main()
