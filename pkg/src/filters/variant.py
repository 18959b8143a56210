"""Filter variants and their (prediction encoding, measurement update) pairing"""
from enum import Enum


class PredictionEncoding(str, Enum):
    """What the time update integrates alongside the mean"""
    COVARIANCE_JACOBIAN = "covariance-jacobian"  # P with the drift Jacobian
    COVARIANCE = "covariance"                    # P via moment equations
    CHOLESKY = "cholesky"                        # P^{1/2} via square-root moment equations
    SAMPLE_POINTS = "sample-points"              # the point matrix itself


class UpdateKernel(str, Enum):
    """Measurement update"""
    JACOBIAN = "jacobian"
    CONVENTIONAL = "conventional"
    TWO_QR = "two-qr"
    BLOCK_QR = "block-qr"


class FilterVariant(str, Enum):
    """Estimator ids accepted on the command line"""
    STD_EKF = "std-ekf"
    MDE = "mde"
    SPDE = "spde"
    SR_MDE_A = "sr-mde-a"
    SR_MDE_B = "sr-mde-b"
    SR_SPDE_A = "sr-spde-a"
    SR_SPDE_B = "sr-spde-b"

    @property
    def encoding(self) -> PredictionEncoding:
        return VARIANT_TABLE[self][0]

    @property
    def kernel(self) -> UpdateKernel:
        return VARIANT_TABLE[self][1]

    @property
    def square_root(self) -> bool:
        """True when the belief carries a Cholesky factor"""
        return self.kernel in (UpdateKernel.TWO_QR, UpdateKernel.BLOCK_QR)


VARIANT_TABLE: dict[FilterVariant, tuple[PredictionEncoding, UpdateKernel]] = {
    FilterVariant.STD_EKF: (PredictionEncoding.COVARIANCE_JACOBIAN, UpdateKernel.JACOBIAN),
    FilterVariant.MDE: (PredictionEncoding.COVARIANCE, UpdateKernel.CONVENTIONAL),
    FilterVariant.SPDE: (PredictionEncoding.SAMPLE_POINTS, UpdateKernel.CONVENTIONAL),
    FilterVariant.SR_MDE_A: (PredictionEncoding.CHOLESKY, UpdateKernel.TWO_QR),
    FilterVariant.SR_MDE_B: (PredictionEncoding.CHOLESKY, UpdateKernel.BLOCK_QR),
    FilterVariant.SR_SPDE_A: (PredictionEncoding.SAMPLE_POINTS, UpdateKernel.TWO_QR),
    FilterVariant.SR_SPDE_B: (PredictionEncoding.SAMPLE_POINTS, UpdateKernel.BLOCK_QR),
}


def parse_variants(ids: str | list) -> list[FilterVariant]:
    """Comma-separated or list of ids, order kept, duplicates dropped"""
    if isinstance(ids, str):
        ids = ids.split(",")
    variants = []
    for v in ids:
        if isinstance(v, FilterVariant):
            variants.append(v)
        elif v.strip():
            variants.append(FilterVariant(v.strip().lower()))
    return list(dict.fromkeys(variants))
