#!/usr/bin/env python3
"""
swarm-cluster command-line application

Runs PSO based K-means and the baseline clustering algorithms, scores them with
the validity indices and compares them with one-way ANOVA. Experiments are
configured via YAML files under configs/.

Usage:
    python app.py run configs/wine.yaml
    python app.py cluster wine --algo canonical-pso -k 3 --seed 1
    python app.py indices data.csv labels.csv --label-column 0
    python app.py toy
"""
import sys

from swarm_cluster.cli import main

if __name__ == "__main__":
    sys.exit(main())
