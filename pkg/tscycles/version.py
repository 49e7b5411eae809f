# -*- coding: utf-8 -*-

# Licensed under the Apache License, Version 2.0 (the "License"); you may
# not use this file except in compliance with the License. You may obtain
# a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations
# under the License.

"""
Package version.

pbr writes the version into the package metadata at build time, so we read it back
from there. Running from a plain source checkout (eg. tests) falls back to a dev tag.
"""

from importlib import metadata


try:
    version_string = metadata.version("tscycles")
except metadata.PackageNotFoundError:
    version_string = "0.0.0.dev0"

release_string = version_string
