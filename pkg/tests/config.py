# -*- coding: utf-8 -*-
import glob
import os
import pytest


temporarily_skipping = pytest.mark.skip("work in progress")
# suites that take seconds rather than milliseconds
slow = pytest.mark.slow
TEST_DATA_DIR = os.path.join(os.path.dirname(__file__), 'data')


def get_filenames(folder: str, extension: str):
    return sorted(glob.glob(os.path.join(folder, '*.' + extension)))
