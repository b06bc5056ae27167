# -*- coding: utf-8 -*-
import pytest

from config import slow
from gausslike.enums import PotentialKind, Verdict
from gausslike.models.ifs_core import IfsSystem
from gausslike.verification import (
    CHECK_COLUMNS, GRID_COLUMNS, LEMMA_CASES, CheckResult, SuiteReport,
    counting_grid, lemma_check, run_suite)
from gausslike.warning import ConfigError


class TestReports(object):
    def test_check_row(self):
        check = CheckResult('regimes', 'T1-II d=2', False, 0.3, 1 / 3)
        row = check.as_row()
        assert check.verdict == Verdict.FAIL
        assert set(row) == set(CHECK_COLUMNS)
        assert row['verdict'] == Verdict.FAIL

    def test_suite_report(self):
        checks = [CheckResult('x', 'a', True), CheckResult('x', 'b', False)]
        report = SuiteReport.from_checks('x', checks)
        assert not report.passed
        assert report.failures == 1

    def test_unknown_suite(self):
        with pytest.raises(ConfigError, match='choose from'):
            run_suite('everything')


class TestFastSuites(object):
    @pytest.mark.parametrize('name', ['potentials', 'regimes'])
    def test_passes(self, name):
        report = run_suite(name)
        assert report.suite == name
        assert report.rows
        assert report.passed, [r for r in report.rows
                               if r['verdict'] != Verdict.PASS]

    def test_zeta_checks_in_potentials(self):
        report = run_suite('potentials')
        assert any(r['check'].startswith('zeta(') for r in report.rows)

    def test_axioms_single_system(self):
        report = run_suite('axioms', systems=[IfsSystem.mirrored_gauss()],
                           moran_range=10)
        assert report.passed
        assert all(not r['check'].startswith('affine axiom')
                   for r in report.rows)

    def test_small_counting_grid(self):
        rows = counting_grid(m_values=(50, 100), n_values=(2,),
                             eps_values=(0.25,), s_values=(1.0,))
        assert len(rows) == 8
        assert set(rows[0]) == set(GRID_COLUMNS)
        assert all(row['pass'] for row in rows)
        for row in rows:
            if row['valid']:
                assert row['sum'] <= row['bound']
            else:
                assert row['sum'] is None


@slow
class TestSlowSuites(object):
    @pytest.mark.parametrize('name', ['schedules', 'covering', 'lemA'])
    def test_passes(self, name):
        assert run_suite(name).passed

    def test_counting(self):
        report = run_suite('counting')
        assert report.columns == GRID_COLUMNS
        assert report.passed


class TestLemmaCases(object):
    @pytest.mark.parametrize('case', [
        c for c in LEMMA_CASES if c.potential.kind ==
        PotentialKind.STRETCHED_EXP])
    def test_stretched_at_200(self, case):
        assert case.eps == pytest.approx(case.potential.parameter / 3)
        assert (case.n_max, case.tolerance) == (200, 0.02)
        check = lemma_check(case)
        assert check.passed, check.detail

    def test_eps_reaches_schedule(self):
        case = LEMMA_CASES[0]
        wide = lemma_check(case._replace(eps=0.3))
        assert 'eps=0.3' in wide.check
        assert wide.value != lemma_check(case).value


class TestScheduleSuite(object):
    @slow
    @pytest.mark.parametrize('seed', [0, 7])
    def test_sampled_envelope(self, seed):
        report = run_suite('schedules', seed=seed)
        row = next(r for r in report.rows
                   if r['check'].startswith('T1-II sampled'))
        assert row['verdict'] == Verdict.PASS
        assert row['value'] <= 1e-6
