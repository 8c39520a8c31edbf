"""Code style checks."""
import os

import pycodestyle
import pytest

PACKAGE_ROOT = os.path.dirname(os.path.dirname(os.path.dirname(__file__)))


@pytest.mark.parametrize('directory', ['bpcfl', 'tests'])
def test_pep8_conformance(directory):
    """Check a source directory with pycodestyle."""
    style = pycodestyle.StyleGuide()
    report = style.check_files([os.path.join(PACKAGE_ROOT, directory)])
    assert report.total_errors == 0, (
        "{} errors in '{}', see the messages above prefixed with "
        "file:line:column; `yapf -i <file>` fixes most of them".format(
            report.total_errors, directory))
