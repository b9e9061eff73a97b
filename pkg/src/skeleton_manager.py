from src.documents import parse_skeleton
from src.errors import SkeletonValidationError, TameAlgebraError
from src.graded_skeleton import (CrossedStatus, canonical_tower, crossed_product_test, degree_three_ways,
                                 maximal_subfield_of_C, validate)
from src.run_logger import setup_logger

logger = setup_logger(__name__)


class SkeletonManager:
    """Handle validation, canonical towers and the crossed-product test for skeletons."""

    def __init__(self, conductor_bound: int | None = None):
        self.conductor_bound = conductor_bound

    def validate_skeleton(self, document) -> dict:
        """
        Validate a skeleton document against every defining identity.

        Returns:
            dict: the validation report; success is False when an identity fails
        """
        try:
            skeleton = parse_skeleton(document)
            report = validate(skeleton)
            if not report.valid:
                logger.warning(f"Skeleton rejected with {len(report.violations)} violation(s)")
                return {
                    'success': False,
                    'report': report.to_document(),
                    'error': "Invalid skeleton: " + "; ".join(v.identity for v in report.violations)
                }
            logger.info(f"Skeleton valid: deg D = {report.deg_D}")
            return {
                'success': True,
                'report': report.to_document(),
                'message': f"Valid skeleton, deg D = {report.deg_D}",
                'exit_code': 0
            }
        except TameAlgebraError as e:
            error_msg = f"Input error: {e}"
            logger.error(error_msg)
            return {'success': False, 'error': error_msg}

    def canonical_tower(self, document) -> dict:
        """Compute U, Z, C, E for a valid skeleton, plus the three degree computations."""
        try:
            skeleton = parse_skeleton(document)
            tower = canonical_tower(skeleton)
            degrees = degree_three_ways(skeleton)
            t = maximal_subfield_of_C(skeleton)
            report = tower.to_document()
            report['deg_D'] = list(degrees)
            report['T'] = t.to_document()
            logger.info(f"Canonical tower computed, deg C = {tower.deg_C}")
            return {
                'success': True,
                'report': report,
                'message': f"Canonical tower: deg C = {tower.deg_C}, [D:E] = {tower.index_D_over_E}, "
                           f"deg D = {degrees[0]}",
                'exit_code': 0
            }
        except SkeletonValidationError as e:
            logger.error(str(e))
            return {'success': False, 'report': e.report.to_document(), 'error': str(e)}
        except TameAlgebraError as e:
            error_msg = f"Input error: {e}"
            logger.error(error_msg)
            return {'success': False, 'error': error_msg}

    def crossed_product(self, document) -> dict:
        """Decide whether the skeleton describes a crossed product."""
        try:
            skeleton = parse_skeleton(document)
            verdict = crossed_product_test(skeleton, self.conductor_bound)
            logger.info(f"Crossed-product test: {verdict.status.value} ({verdict.rationale})")
            return {
                'success': True,
                'report': verdict.to_document(),
                'message': verdict.message,
                'exit_code': 2 if verdict.status is CrossedStatus.UNKNOWN else 0
            }
        except SkeletonValidationError as e:
            logger.error(str(e))
            return {'success': False, 'report': e.report.to_document(), 'error': str(e)}
        except TameAlgebraError as e:
            error_msg = f"Input error: {e}"
            logger.error(error_msg)
            return {'success': False, 'error': error_msg}
