# Copyright (c) 2024 The dfdgm Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


import sys
import logging
import argparse
import collections

import dfdgm.common
import dfdgm.util.config
import dfdgm.util.counts
import dfdgm.util.terrain
import dfdgm.util.converge
import dfdgm.util.integrate
import dfdgm.util.inexactness
import dfdgm.util.energy_drift
import dfdgm.util.work_precision

from typing import Optional

modules = collections.OrderedDict([
    ('integrate', dfdgm.util.integrate),
    ('converge', dfdgm.util.converge),
    ('energy-drift', dfdgm.util.energy_drift),
    ('counts', dfdgm.util.counts),
    ('inexactness', dfdgm.util.inexactness),
    ('work-precision', dfdgm.util.work_precision),
    ('terrain', dfdgm.util.terrain),
])

EXIT_OK = 0
EXIT_FAILED = 1  # A numerical failure or a failed check
EXIT_CONFIG = 2  # Bad configuration, arguments or files


def abort(msg: str, excode: int = EXIT_CONFIG) -> None:
    sys.stderr.write(f'{msg}\n')
    sys.exit(excode)


def init_args(argv: Optional[list[str]] = None) -> None:
    """!
    Parameter handling

    This works both with and without a utility name:
        - When Config.util is None, the utility name is a parameter.
          E.g. dfdgm.py converge ....
        - When Config.util is set, force this to be the utility name.

    Also initializes logging and sets Config.module
    """
    config = dfdgm.util.config.get_config()

    parser = argparse.ArgumentParser()

    parser.add_argument('-d', '--debug', action='store_true',
                        default=config.debug,
                        help='Enable debugging')

    parser.add_argument('--info', action='store_true',
                        default=config.info,
                        help='Enable informational messages')

    if config.util is None:
        sub = parser.add_subparsers(dest='what')

        # Add the arguments for each module
        for k, v in modules.items():
            subparser = sub.add_parser(k)
            v.add_args(subparser)

        # In this mode, this gets set later
        module = None
    elif config.util in modules:
        module = modules[config.util]
        module.add_args(parser)
    else:
        abort(f'Bad utility name: {config.util}')

    args = parser.parse_args(argv)

    # Handle top-level parameters
    config.debug = args.debug
    config.info = args.info

    if config.util:
        config.what = config.util
    elif args.what:
        config.what = args.what
    else:
        parser.error('Must specify a utility')

    if module is None:
        module = modules.get(config.what)
        if module is None:
            abort(f'Bad action: {config.what}')

    assert module is not None

    config.module = module

    # Init log early
    init_log()

    logging.debug('Module: %s', config.what)

    # Handle module params
    module.handle_args(args)


def init_log() -> None:
    config = dfdgm.util.config.get_config()

    if config.debug:
        level = logging.DEBUG
    elif config.info:
        level = logging.INFO
    else:
        level = logging.WARNING

    logging.basicConfig(level=level, format='%(levelname)s: %(message)s')


def init(argv: Optional[list[str]] = None) -> None:
    config = dfdgm.util.config.get_config()

    init_args(argv)
    logging.debug('Initializing module')
    config.module.init()


def doit() -> int:
    config = dfdgm.util.config.get_config()

    logging.debug('Running module')
    ret: int = config.module.doit()

    return ret


def run(util: Optional[str], argv: Optional[list[str]] = None) -> int:
    """Runs a utility and maps failures to exit codes."""
    config = dfdgm.util.config.get_config()

    config.util = util

    try:
        init(argv)
        ret = doit()
    except dfdgm.common.AbortError as r:
        if not r.error_shown:
            logging.error('Execution failed: %s', r)
        ret = r.excode
    except dfdgm.common.NumericalError as e:
        logging.error('%s', e)
        ret = EXIT_FAILED
    except (dfdgm.common.EnergyDomainError, dfdgm.common.UnsupportedOperationError) as e:
        logging.error('%s', e)
        ret = EXIT_FAILED
    except (ValueError, OSError) as e:
        # ConfigError and GridFormatError included
        logging.error('%s', e)
        ret = EXIT_CONFIG
    except Exception:
        logging.exception('Unexpected failure')
        ret = EXIT_FAILED

    return ret


def runutil(util: Optional[str]) -> None:
    """!
    Run for a certain utility or for all of them

    @param util     A utility name, or None to provide all of them
    """
    sys.exit(run(util))

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
