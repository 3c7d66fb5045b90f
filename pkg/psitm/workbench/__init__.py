from .config_validation import validate_stress_config, InvalidStressConfig
from .manifest import RunManifest
from .products import ResultsDirectory
from .reproduce import cmd_reproduce_examples
from .figures import cmd_figure_data
from .stress import cmd_stress
