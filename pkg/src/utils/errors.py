# Copyright 2026 The bellsim Authors.
# See LICENSE file for licensing details.


class BellSimException(Exception):
    pass


class ConfigError(BellSimException):
    """An option failed validation.

    The message always starts with the option name.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f'{field}: {message}')
        self.field = field


class NoThresholdError(BellSimException):
    pass


class NonMonotoneError(BellSimException):
    pass


class CircuitError(BellSimException):
    pass
