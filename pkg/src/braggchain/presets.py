"""Named reference scenarios.

Each preset is a list of runs; a run is a mapping of :class:`RunParams`
field overrides on top of the preset's shared ``base`` block.  Detunings, line
shifts and broadenings are in MHz, wavelengths and spreads in nm.
"""

GAMMA0_MHZ = 5.2

_FIG1 = dict(n_atoms=2000, n_chains=1, fill_factor=1.0, gamma_1d=0.01, shift_mhz=0.0,
             n_realizations=1)
_CHIRAL = dict(chirality="chiral", forward_factor=2.8, forward_backward_ratio=12.0)
_EXPERIMENT = dict(n_atoms=2000, n_chains=2, fill_factor=0.3, gamma_1d=0.007, shift_mhz=3.0)

PRESETS = {
    "fig1c": {
        "description": "ordered chain, symmetric coupling, trap detunings 0-0.3 nm",
        "base": _FIG1,
        "runs": [{"label": f"dl{dl:.1f}nm", "trap_detuning_nm": dl} for dl in (0.0, 0.1, 0.2, 0.3)],
    },
    "fig1d": {
        "description": "ordered chain, chiral coupling, trap detunings 0-0.3 nm",
        "base": {**_FIG1, **_CHIRAL},
        "runs": [{"label": f"dl{dl:.1f}nm", "trap_detuning_nm": dl} for dl in (0.0, 0.1, 0.2, 0.3)],
    },
    "fig3c": {
        "description": "two chains at f = 0.3, symmetric coupling, 0.12 nm trap",
        "base": _EXPERIMENT,
        "runs": [{"label": "fig3c", "trap_detuning_nm": 0.12}],
    },
    "fig3d": {
        "description": "two chains, symmetric coupling, 0.2 nm trap",
        "base": _EXPERIMENT,
        "runs": [{"label": "fig3d", "trap_detuning_nm": 0.2}],
    },
    "fig4-inset": {
        "description": "peak reflectance under random atom loss from f = 0.3 arrays",
        "base": {**_EXPERIMENT, "trap_detuning_nm": 0.2, "mode": "atom_number",
                 "survival_grid": [round(1.0 - 0.05 * i, 2) for i in range(20)]},
        "runs": [{"label": "fig4-inset"}],
    },
    "fig5b": {
        "description": "chiral versus symmetric coupling at 0.2 nm",
        "base": {**_EXPERIMENT, "trap_detuning_nm": 0.2},
        "runs": [{"label": "chiral", **_CHIRAL}, {"label": "symmetric"}],
    },
    "figS2": {
        "description": "inhomogeneous broadening 0, 0.6 and 1.2 Gamma0 at 0.2 nm",
        "base": {**_EXPERIMENT, "trap_detuning_nm": 0.2},
        "runs": [{"label": f"sigma{s:.1f}G0", "sigma_delta_mhz": round(s * GAMMA0_MHZ, 6)}
                 for s in (0.0, 0.6, 1.2)],
    },
    "figS3": {
        "description": "filling factors 0.1-0.5 on two chains versus a full single chain",
        "base": {**_EXPERIMENT, "trap_detuning_nm": 0.2},
        "runs": [{"label": f"f{f:.1f}", "fill_factor": f} for f in (0.1, 0.3, 0.5)]
        + [{"label": "single-full", "n_chains": 1, "fill_factor": 1.0}],
    },
    "figS5": {
        "description": "axial position spread 0 and 22 nm, on-resonance and 0.2 nm traps",
        "base": _EXPERIMENT,
        "runs": [{"label": f"dl{dl:.1f}nm-sz{sz:.0f}nm", "trap_detuning_nm": dl, "sigma_z_nm": sz}
                 for dl in (0.0, 0.2) for sz in (0.0, 22.0)],
    },
}
