#!/usr/bin/env python3
"""Signaling as a classical channel.

When a box is signaling, some conditional correlator pair (x, y) that would
coincide for nonsignaling correlations differs: the remote setting choice is
readable from local statistics through a binary asymmetric channel with
p = (1+x)/2, q = (1+y)/2.  Capacity quantifies the bits per use.
"""
import numpy as np

from signalcap import boxes, channels

print("== closed form vs iterative maximization ==")
for p, q in [(1.0, 0.0), (1.0, 0.5), (0.75, 0.25), (0.9, 0.3)]:
    ch = channels.BinaryChannel(p, q)
    closed = channels.capacity(ch)
    iterative = channels.capacity_oracle(ch)
    print(f"C({p}, {q}) = {closed:.9f}   (iterative {iterative:.9f})")
print()

print("== relabeling symmetries ==")
rng = np.random.default_rng(0)
p, q = rng.uniform(0, 1, 2)
print(f"C({p:.3f},{q:.3f}) = {channels.capacity(channels.BinaryChannel(p, q)):.9f}")
print(f"C({q:.3f},{p:.3f}) = {channels.capacity(channels.BinaryChannel(q, p)):.9f}")
print(f"C({1-p:.3f},{1-q:.3f}) = {channels.capacity(channels.BinaryChannel(1-p, 1-q)):.9f}")
print()

print("== channels of a signaling box ==")
box = boxes.reference_box(1.5, 0.28)
fam = channels.channels_from_box(box)
for label, ch in fam.channels:
    print(f"{label}: p={ch.p:.4f} q={ch.q:.4f} capacity={channels.capacity(ch):.6f}")
print(f"max capacity: {fam.max_capacity():.6f}")
print()

print("== nonsignaling boxes carry nothing ==")
fam = channels.channels_from_box(boxes.random_nonsignaling(2, 7))
print("capacities:", list(fam.capacities().values()))
