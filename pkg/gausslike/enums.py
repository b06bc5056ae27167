# -*- coding: utf-8 -*-
from enum import IntFlag, auto


class SystemKind(IntFlag):
    AFFINE_POWER_LAW = auto()
    MIRRORED_GAUSS_CF = auto()


class PotentialKind(IntFlag):
    """
    phi(j) = j^a, e^{(log j)^b} and e^{j^c} respectively.
    """
    POWER_LAW = auto()
    LOG_POWER = auto()
    STRETCHED_EXP = auto()


class GrowthKind(IntFlag):
    """
    Phi(n) = e^{n^alpha}, e^{beta^n} and e^{e^{gamma^n}} respectively.
    """
    POLY_EXP = auto()
    SUPER_EXP = auto()
    DOUBLE_EXP = auto()


class Scale(IntFlag):
    """
    How many logarithms have been taken of a stored magnitude. The members are
    declared in increasing order, so comparing two scales compares how large
    the numbers they can hold are.
    """
    LOG = auto()
    LOGLOG = auto()
    LOG3 = auto()


class RegimeTag(IntFlag):
    T1_I1 = auto()
    T1_I2 = auto()
    T1_II = auto()
    T2_I1 = auto()
    T2_I2 = auto()
    T2_II = auto()
    T3_I1 = auto()
    T3_I2 = auto()
    T3_II = auto()
    T3_III = auto()
    T4_I1 = auto()
    T4_I2 = auto()
    CRITICAL = auto()
    UNCOVERED = auto()

    # full-dimension cases, which need bounded distortion
    FULL = T1_I1 | T2_I1 | T3_I1 | T4_I1
    NO_VALUE = CRITICAL | UNCOVERED


class ScheduleCase(IntFlag):
    """
    Regime cases that come with an explicit B(s_n, t_n, N) schedule.
    """
    T1_II = auto()
    T1_I2A = auto()
    T1_I2B = auto()
    T2_II = auto()
    T2_I2A = auto()
    T2_I2B = auto()
    T3_I2 = auto()
    T3_II = auto()
    T3_III = auto()

    # only the lower bound is a schedule; the upper bound is a product cover
    LOWER_ONLY = T1_I2A | T2_I2A


class BoundFlavor(IntFlag):
    # fixed epsilon, the set contains E_phi(Phi)
    UPPER = auto()
    # vanishing epsilon_n, the set is contained in E_phi(Phi)
    LOWER = auto()


class Verdict(IntFlag):
    PASS = auto()
    FAIL = auto()

    VALID = auto()
    INVALID = auto()

    VANISHING = auto()
    DIVERGING = auto()
    INCONCLUSIVE = auto()

    DECAYS = auto()
    GROWS = auto()


class CoverMethod(IntFlag):
    EXACT = auto()
    INTEGRAL = auto()


class CoverKind(IntFlag):
    """
    CYLINDER covers with the level-n cylinders I_n; HULL covers with the
    hulls D_n of the level-(n+1) cylinders allowed by the next window.
    """
    CYLINDER = auto()
    HULL = auto()
