"""
Verification suites and the manager that runs them
"""
import logging
import time
from abc import ABC, abstractmethod
from typing import Dict, List, Optional

from ..core.braiding import (IDENTITY_IDS, Braiding, chain_degree_bound, resolve_braiding,
                             verify_rmatrix_identities)
from ..core.errors import ConfigError
from ..core.gaudin import (GaudinSystem, braided_sites, classical_sites, load_system_descriptor,
                           system_from_descriptor, verify_gaudin, verify_talalaev)
from ..core.ideal import default_ideal_plan
from ..core.scalar import GENERIC_Q_GUARDS, make_sample_plan
from ..core.symfun import (verify_AL_chain, verify_bethe_commutativity, verify_ehat_multiplier, verify_newton,
                           verify_qdet_central, verify_shift_lemma, verify_shifted_relations, verify_tau)
from ..models.config import RunConfig, settings
from ..models.report import CheckRecord, Report
from ..models.schemas import SystemDescriptor

logger = logging.getLogger(__name__)


class VerificationSuite(ABC):
    """A named group of checks run against one braiding"""

    description: str = ""
    default_braiding: Optional[str] = None

    @property
    @abstractmethod
    def name(self) -> str:
        """Suite name used on the command line"""
        pass

    @abstractmethod
    def run(self, B: Braiding, config: RunConfig) -> List[CheckRecord]:
        """Evaluate every check; failures are records, not exceptions"""
        pass

    def dimension(self, config: RunConfig) -> int:
        return config.N

    def braiding_for(self, config: RunConfig) -> Braiding:
        source = config.braiding or self.default_braiding or settings.default_braiding
        return resolve_braiding(source, self.dimension(config))

    def ideal_plan(self, config: RunConfig):
        return default_ideal_plan(config.seed)


class BraidSuite(VerificationSuite):
    description = "braid relation, kind, Yang-Baxter with parameters, inversion, C-matrix"
    selection = ("braid", "kind", "yang_baxter", "inversion", "c_matrix")

    @property
    def name(self) -> str:
        return "braid"

    def run(self, B: Braiding, config: RunConfig) -> List[CheckRecord]:
        bound = chain_degree_bound(config.kmax + 1)
        plan = make_sample_plan(bound, max(config.points, bound + 1), config.seed,
                                excluded=GENERIC_Q_GUARDS, span=settings.sample_span)
        return verify_rmatrix_identities(B, self.selection, plan, config.kmax, config.q_mode, config.seed)


class RMatrixSuite(BraidSuite):
    description = "every R-matrix identity: symmetrizers, traces, chains, closed forms"
    selection = IDENTITY_IDS

    @property
    def name(self) -> str:
        return "rmatrix"


class BetheSuite(VerificationSuite):
    description = "commutativity of quantum elementary symmetric polynomials (or power sums)"

    @property
    def name(self) -> str:
        return "bethe"

    def run(self, B: Braiding, config: RunConfig) -> List[CheckRecord]:
        return verify_bethe_commutativity(B, config.pairs, config.T, config.D, config.family,
                                          plan=self.ideal_plan(config), q_mode=config.q_mode,
                                          certificates=config.certificates, workers=config.workers)


class NewtonSuite(VerificationSuite):
    description = "Newton identities between e_k and p_k"

    @property
    def name(self) -> str:
        return "newton"

    def run(self, B: Braiding, config: RunConfig) -> List[CheckRecord]:
        return verify_newton(B, config.kmax, config.T, config.D, plan=self.ideal_plan(config),
                             q_mode=config.q_mode, certificates=config.certificates, workers=config.workers)


class QdetSuite(VerificationSuite):
    description = "centrality of the quantum determinant e_m"

    @property
    def name(self) -> str:
        return "qdet"

    def run(self, B: Braiding, config: RunConfig) -> List[CheckRecord]:
        return verify_qdet_central(B, config.T, config.D, plan=self.ideal_plan(config), q_mode=config.q_mode,
                                   certificates=config.certificates, workers=config.workers)


class ShiftLemmaSuite(VerificationSuite):
    description = "shifted-trace lemma and shifted defining relations"

    @property
    def name(self) -> str:
        return "shiftlemma"

    def run(self, B: Braiding, config: RunConfig) -> List[CheckRecord]:
        records = verify_shift_lemma(B, config.k, config.p, config.T)
        records.extend(verify_shifted_relations(B, config.T, config.D, plan=self.ideal_plan(config),
                                                q_mode=config.q_mode, certificates=config.certificates,
                                                workers=config.workers))
        return records


class ALChainSuite(VerificationSuite):
    description = "exchange of symmetrizers and chains inside the Yangian (Hecke)"

    @property
    def name(self) -> str:
        return "alchain"

    def run(self, B: Braiding, config: RunConfig) -> List[CheckRecord]:
        return verify_AL_chain(B, config.k, config.T, config.D, plan=self.ideal_plan(config),
                               q_mode=config.q_mode, certificates=config.certificates, workers=config.workers)


class GaudinSuite(VerificationSuite):
    description = "site relations, Lax relations and Hamiltonian commutativity of Gaudin systems"
    default_braiding = "flip"

    @property
    def name(self) -> str:
        return "gaudin"

    def dimension(self, config: RunConfig) -> int:
        return config.m

    def descriptor(self, config: RunConfig) -> Optional[SystemDescriptor]:
        return load_system_descriptor(config.system) if config.system else None

    def braiding_for(self, config: RunConfig) -> Braiding:
        descriptor = self.descriptor(config)
        if descriptor is None:
            return super().braiding_for(config)
        return resolve_braiding(descriptor.braiding or "flip", descriptor.m)

    def system(self, B: Braiding, config: RunConfig) -> GaudinSystem:
        descriptor = self.descriptor(config)
        if descriptor is not None:
            logger.info("Gaudin system from %s", config.system)
            return system_from_descriptor(descriptor)
        points = config.site_points or None
        if config.flavor == "classical":
            if B.name != "flip":
                logger.warning("Classical flavor uses the flip; ignoring %s", B.label)
            return classical_sites(config.m, config.sites, points)
        return braided_sites(B, config.sites, points, config.flavor)

    def run(self, B: Braiding, config: RunConfig) -> List[CheckRecord]:
        system = self.system(B, config)
        return verify_gaudin(system, None, config.D, config.q_mode, config.certificates, config.workers,
                             seed=config.seed)


class TalalaevSuite(GaudinSuite):
    description = "commutativity and residues of the Talalaev operators QH_k(u)"

    @property
    def name(self) -> str:
        return "talalaev"

    def run(self, B: Braiding, config: RunConfig) -> List[CheckRecord]:
        system = self.system(B, config)
        return verify_talalaev(system, None, min(config.kmax, 2), config.workers, seed=config.seed)


class TauSuite(VerificationSuite):
    description = "h-orders of τ_k and the multiplier relating ê_k to e_k (rational case)"
    default_braiding = "flip"

    @property
    def name(self) -> str:
        return "tau"

    def run(self, B: Braiding, config: RunConfig) -> List[CheckRecord]:
        records = verify_tau(B, config.k, config.T, config.D, config.symmetrizer_variant,
                             plan=self.ideal_plan(config), q_mode=config.q_mode,
                             certificates=config.certificates)
        records.extend(verify_ehat_multiplier(B, config.k, config.T, config.symmetrizer_variant))
        return records


class SuiteManager:
    """Registry of verification suites"""

    def __init__(self):
        self.suites: Dict[str, VerificationSuite] = {}
        self._setup_default_suites()

    def _setup_default_suites(self):
        for suite in (BraidSuite(), RMatrixSuite(), BetheSuite(), NewtonSuite(), QdetSuite(),
                      ShiftLemmaSuite(), ALChainSuite(), GaudinSuite(), TalalaevSuite(), TauSuite()):
            self.add_suite(suite)

    def get_suite(self, name: str) -> Optional[VerificationSuite]:
        return self.suites.get(name)

    def add_suite(self, suite: VerificationSuite):
        self.suites[suite.name] = suite

    def list_suites(self) -> List[str]:
        return list(self.suites.keys())

    def run(self, config: RunConfig) -> Report:
        """Resolve the braiding, validate the config against it and run the suite"""
        suite = self.get_suite(config.suite)
        if suite is None:
            raise ConfigError([f"unknown suite '{config.suite}'"])
        config.validated()
        B = suite.braiding_for(config)
        config.validated(B.kind.value)
        logger.info("Suite %s on %s started", suite.name, B.label)
        started = time.perf_counter()
        records = suite.run(B, config)
        report = Report(suite=suite.name, braiding=B.label, config=config.echo()).add(records)
        elapsed = (time.perf_counter() - started) * 1000.0
        logger.info("Suite %s finished in %.0f ms: %s passed, %s failed, %s inconclusive, %s skipped",
                    suite.name, elapsed, report.summary.passed, report.summary.failed,
                    report.summary.inconclusive, report.summary.skipped)
        return report


# Global suite manager instance
suite_manager = SuiteManager()
