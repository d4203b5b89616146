# -*- coding: utf-8 -*-


class ConzeroError(Exception):
    def __init__(self, strerror, modulus=None):
        self.args = (strerror, modulus)
        self.strerror = strerror
        self.modulus = modulus

    def __str__(self):
        if self.modulus is not None:
            return '%s (mod %s)' % self.args
        else:
            return self.strerror


class ModulusError(ConzeroError):
    pass


class WeightError(ConzeroError):
    pass


class NotAUnitError(ConzeroError):
    pass


class DomainError(ConzeroError):
    pass


class NotExtremalError(ConzeroError):
    pass


class SelectorError(ConzeroError):
    pass


class CharacterizationViolated(ConzeroError):
    pass


class InternalConsistencyError(ConzeroError):
    pass


class BudgetExhausted(ConzeroError):
    def __init__(self, strerror, modulus=None, partial=None, lower_bound=None):
        super(BudgetExhausted, self).__init__(strerror, modulus)
        self.partial = partial
        self.lower_bound = lower_bound


class RecipeSyntaxError(ConzeroError):
    def __init__(self, strerror, lineno=None):
        self.args = (strerror, lineno)
        self.strerror = strerror
        self.modulus = None
        self.lineno = lineno

    def __str__(self):
        if self.lineno is not None:
            return '%s on line %s' % self.args
        else:
            return self.strerror


class SequenceError(ConzeroError):
    pass


class ConnectorError(ConzeroError):
    pass
