from src.abelian_ext import QPlace
from src.advanced.covers import DemandMode, NotFoundWithinBound, cover_search
from src.advanced.location import FiberStatus, classify, witness_noncrossed
from src.documents import parse_demands, parse_fiber, parse_field
from src.errors import TameAlgebraError
from src.run_logger import setup_logger
from src.validator import InputValidator

logger = setup_logger(__name__)


class FiberManager:
    """Handle fiber classification, noncrossed witnesses and cover searches over Q."""

    def __init__(self, conductor_bound: int | None = None):
        self.conductor_bound = conductor_bound

    def classify_fiber(self, document) -> dict:
        """
        Classify a fiber of the tame Brauer group.

        Args:
            document: fiber document with Z, beta0 and ratio

        Returns:
            dict: the verdict; exit_code 2 when height testing stayed undecided
        """
        try:
            fiber = parse_fiber(document)
            verdict = classify(fiber, self.conductor_bound)
            message = verdict.status.value
            bounds = [f"n{p}={b.n_p}" for p, b in sorted(verdict.bounds.items()) if b.n_p is not None]
            if bounds:
                message += ", " + ", ".join(bounds)
            logger.info(f"Fiber over {fiber.z}: {message}")
            return {
                'success': True,
                'report': verdict.to_document(),
                'message': message,
                'exit_code': 2 if verdict.status is FiberStatus.UNKNOWN else 0
            }
        except TameAlgebraError as e:
            error_msg = f"Input error: {e}"
            logger.error(error_msg)
            return {'success': False, 'error': error_msg}

    def build_witness(self, document, m: int, exclude=(), support_size: int | None = None) -> dict:
        """Produce a noncrossed residue class of index m, away from the excluded primes."""
        try:
            if not InputValidator.validate_positive(m):
                raise TameAlgebraError(f"Invalid index m: {m}")
            avoided = []
            for text in exclude:
                if not InputValidator.validate_place(text) or text == 'inf':
                    raise TameAlgebraError(f"Invalid excluded prime: {text}")
                avoided.append(QPlace.parse(text))
            fiber = parse_fiber(document)
            witness = witness_noncrossed(fiber, m, support_size, avoided, self.conductor_bound)
            logger.info(f"Witness of index {m} built over {fiber.z}")
            return {
                'success': True,
                'report': witness.to_document(),
                'message': f"Noncrossed residue class of index {m}: {witness.gamma}",
                'exit_code': 0
            }
        except TameAlgebraError as e:
            error_msg = f"Input error: {e}"
            logger.error(error_msg)
            return {'success': False, 'error': error_msg}

    def search_cover(self, field_document, m: int, demands_document, require_cyclic: bool = False,
                     divisible: bool = False) -> dict:
        """Search for an abelian m-cover of a field with the demanded local degrees."""
        try:
            if not InputValidator.validate_positive(m):
                raise TameAlgebraError(f"Invalid cover degree m: {m}")
            z = parse_field(field_document)
            demands = parse_demands(demands_document)
            mode = DemandMode.DIVISIBLE if divisible else DemandMode.EXACT
            found = cover_search(z, m, demands, self.conductor_bound, require_cyclic, mode)
            if isinstance(found, NotFoundWithinBound):
                logger.warning(f"Cover search over {z} ended without result: {found.reason}")
                return {
                    'success': True,
                    'report': found.to_document(),
                    'message': f"Not found within bound {found.bound}: {found.reason}",
                    'exit_code': 2
                }
            report = {"found": True, "cover": found.to_document(), "degree": found.degree}
            return {
                'success': True,
                'report': report,
                'message': f"Cover found: {found}",
                'exit_code': 0
            }
        except TameAlgebraError as e:
            error_msg = f"Input error: {e}"
            logger.error(error_msg)
            return {'success': False, 'error': error_msg}
