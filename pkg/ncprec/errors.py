# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Errors for ncprec."""


class NCPrecError(Exception):
    """Base exception for all errors."""

    description = "Unexpected error."

    def __init__(self, description=None, **kwargs):
        """Initialize exception.

        :param description: Message overriding the class description. The
            class description is formatted with ``kwargs`` otherwise.
        """
        self.kwargs = kwargs
        if description is None:
            description = self.description.format(**kwargs)
        self.description = description
        super(NCPrecError, self).__init__(description)


class DimensionMismatchError(NCPrecError):
    """Exception raised when a vector does not match an operator."""

    description = "Expected a vector of length {expected}, got {got}."


class ProblemSizeError(NCPrecError):
    """Exception raised when a problem exceeds an addressable or set size."""

    description = "Problem size {n} exceeds the limit {limit}."


class InvalidParameterError(NCPrecError):
    """Exception raised on parameters violating their preconditions."""


class NonPositiveDiagonalError(NCPrecError):
    """Exception raised when diagonal scaling meets a nonpositive entry."""

    description = "Nonpositive diagonal entry {value!r} at index {index}."

    def __init__(self, index, value, **kwargs):
        """Initialize exception."""
        self.index = index
        self.value = value
        super(NonPositiveDiagonalError, self).__init__(
            index=index, value=value, **kwargs
        )


class InvalidMatrixError(NCPrecError):
    """Exception raised when CSR arrays violate their structure."""


class AsymmetricMatrixError(InvalidMatrixError):
    """Exception raised when a matrix is not symmetric within tolerance."""

    description = "Matrix is not symmetric (max deviation {deviation:.3e})."


class MatrixMarketParseError(NCPrecError):
    """Exception raised when a MatrixMarket file cannot be parsed."""

    description = "Line {line}: {reason}"

    def __init__(self, line, reason, **kwargs):
        """Initialize exception."""
        self.line = line
        self.reason = reason
        super(MatrixMarketParseError, self).__init__(
            line=line, reason=reason, **kwargs
        )


class InconsistentBaselineError(NCPrecError):
    """Exception raised when scaling records disagree on their baseline."""

    description = "Scaling records use different baselines."


#
# Numerical failures
#
class NumericalError(NCPrecError):
    """Base exception for numerical failures."""

    description = "Numerical failure."


class IndefiniteOperatorError(NumericalError):
    """Operator or preconditioner lost positive definiteness."""

    description = "Operator is not positive definite ({where})."


class NonFiniteValueError(NumericalError):
    """A non-finite value showed up during an iteration."""

    description = "Non-finite value encountered in {where}."


class StartingVectorError(NumericalError):
    """Random starting vector degenerated to zero twice."""

    description = "Starting vector vanished after regeneration."
