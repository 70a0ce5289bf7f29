"""
Identity Module
Handles canonical serialization, identity verdicts, incorporation and migration verification.
"""

from .errors import CanonicalSyntaxError, ChainStepError, FormatMismatch
from .canonical import HEADER, CanonicalForm, Canonicalizer
from .identity_service import ChainStep, IdentityService, IdentityVerdict, MigrationReport, Verdict

__all__ = [
    'IdentityService', 'Canonicalizer', 'CanonicalForm', 'IdentityVerdict', 'Verdict',
    'MigrationReport', 'ChainStep', 'HEADER',
    'FormatMismatch', 'ChainStepError', 'CanonicalSyntaxError',
]
