import importlib.util
import os
import sys

# Under ctest, load the module from the build tree even if an editable
# install would otherwise win the import.
_path = os.environ.get("MMSETS_MODULE")
if _path:
    spec = importlib.util.spec_from_file_location("mmsets", _path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    sys.modules["mmsets"] = module
