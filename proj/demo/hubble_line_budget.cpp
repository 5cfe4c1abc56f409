// hubble_line_budget.cpp — Cosmological matching numbers and how strongly a
// Hubble-width line is hidden from laboratory bands.

#include <cstdio>

#include "gtdnoise/cosmo.hpp"
#include "gtdnoise/spectral.hpp"

int main() {
    using namespace gtd;
    const auto k = PhysicalConstants::defaults();
    const auto rep = cosmo::match_report(k);

    std::printf("N_dS               %.3e\n", rep.N_dS);
    std::printf("energy per mode    %.3e J  (%.3f hbar H0)\n", rep.eps_per_mode, rep.eps_per_mode / (k.hbar * k.H0));
    std::printf("holographic m_R    %.3e kg\n", rep.m_R_hol);
    std::printf("Doppler shift      %.3e 1/s\n", cosmo::doppler_shift(2.0 * k.H0, k.v_cmb_over_c));
    std::printf("Planck m_R ratio   %.3e\n\n", cosmo::planck_counterfactual_ratio(k));

    std::printf("%-10s %-12s %-12s %-12s\n", "C_match", "lambda", "N_star", "mass [kg]");
    for (const auto& r : rep.thresholds) std::printf("%-10.3g %-12.3e %-12.3e %-12.3e\n", r.C_match, r.lambda, r.N_star, r.mass);

    std::printf("\nsuppression at 1 Hz: %.2e\n", spectral::offres_suppression(2.0 * 3.141592653589793, k.H0, k.H0));
}
