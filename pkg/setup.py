from setuptools import setup

# All metadata lives in setup.cfg; the version is provided by setuptools_scm
# as configured in pyproject.toml. This file only exists so that editable
# installs work with older versions of pip.
if __name__ == "__main__":
    setup()
