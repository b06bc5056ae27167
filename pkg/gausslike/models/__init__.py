# -*- coding: utf-8 -*-
"""
ifs_core.py
    The concrete d-decaying Gauss-like systems (affine power-law model and
    mirrored continued fractions), words, cylinder intervals, symbolic
    expansion and the axiom/distortion checks.


potentials.py
    Potential and growth-rate families, the LogScaleValue magnitude type and
    log-scale Birkhoff sums.
"""
