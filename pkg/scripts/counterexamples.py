#!/usr/bin/env python3
"""Reproduce the two known failures of the sign predictions and a control case."""
import json
import sys

from borwein_lab.analysis import reproduce_counterexamples

rep = reproduce_counterexamples()
json.dump(rep.to_json(), sys.stdout, indent=1)
print()
sys.exit(0 if rep.reproduced else 1)
