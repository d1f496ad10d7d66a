"""Sequential references and verification."""

from .reference import OracleRefusal, canonical_labels
from .verify import VerificationReport, oracle_solve, verify

__all__ = ["OracleRefusal", "VerificationReport", "canonical_labels", "oracle_solve", "verify"]
