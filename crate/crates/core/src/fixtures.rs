//! Reference values used as regression anchors by the verification
//! harness and the test suites. Counts are exact; n-th roots are the
//! 4-decimal values of `count^{1/n}`; the lower-bound constants are
//! 6-decimal with their exponentials rounded *down* to 4 decimals.

/// `(n, #S_div(n), root, #S_lcm(n), root)`. The lcm column stops at
/// n = 32; the divisor column continues to n = 35.
// the n = 2 roots are 4-decimal table entries, not √2 approximations
#[allow(clippy::approx_constant, clippy::type_complexity)]
pub const TABLE1: &[(usize, u64, f64, Option<u64>, Option<f64>)] = &[
    (1, 1, 1.0000, Some(1), Some(1.0000)),
    (2, 2, 1.4142, Some(2), Some(1.4142)),
    (3, 3, 1.4422, Some(3), Some(1.4422)),
    (4, 8, 1.6818, Some(8), Some(1.6818)),
    (5, 10, 1.5849, Some(10), Some(1.5849)),
    (6, 36, 1.8171, Some(56), Some(1.9560)),
    (7, 41, 1.6998, Some(64), Some(1.8114)),
    (8, 132, 1.8411, Some(192), Some(1.9294)),
    (9, 250, 1.8469, Some(332), Some(1.9060)),
    (10, 700, 1.9254, Some(1_184), Some(2.0292)),
    (11, 750, 1.8254, Some(1_264), Some(1.9142)),
    (12, 4_010, 1.9965, Some(12_192), Some(2.1903)),
    (13, 4_237, 1.9011, Some(12_872), Some(2.0707)),
    (14, 10_680, 1.9398, Some(37_568), Some(2.1221)),
    (15, 24_679, 1.9626, Some(100_836), Some(2.1556)),
    (16, 87_328, 2.0362, Some(311_760), Some(2.2048)),
    (17, 90_478, 1.9569, Some(322_320), Some(2.1087)),
    (18, 435_812, 2.0573, Some(2_338_368), Some(2.2585)),
    (19, 449_586, 1.9839, Some(2_408_848), Some(2.1671)),
    (20, 1_939_684, 2.0625, Some(14_433_408), Some(2.2802)),
    (21, 3_853_278, 2.0588, Some(32_058_912), Some(2.2773)),
    (22, 8_650_900, 2.0669, Some(76_931_008), Some(2.2828)),
    (23, 8_840_110, 2.0046, Some(78_528_704), Some(2.2043)),
    (24, 60_035_322, 2.1091, Some(919_469_408), Some(2.3631)),
    (25, 80_605_209, 2.0714, Some(1_158_792_224), Some(2.3044)),
    (26, 177_211_024, 2.0761, Some(2_689_828_672), Some(2.3051)),
    (27, 368_759_752, 2.0763, Some(4_675_217_824), Some(2.2811)),
    (28, 1_380_348_224, 2.1205, Some(21_679_173_184), Some(2.3396)),
    (29, 1_401_414_640, 2.0673, Some(21_984_820_864), Some(2.2731)),
    (30, 8_892_787_136, 2.1460, Some(381_078_324_992), Some(2.4324)),
    (31, 9_014_369_784, 2.0947, Some(386_159_441_600), Some(2.3646)),
    (32, 33_923_638_848, 2.1334, Some(1_202_247_415_040), Some(2.3851)),
    (33, 59_455_553_072, 2.1208, None, None),
    (34, 126_536_289_568, 2.1210, None, None),
    (35, 207_587_882_368, 2.1055, None, None),
];

/// Fast-tier cutoff: these rows verify in seconds.
pub const TABLE1_FAST_MAX_N: usize = 20;

/// `(b, c(b)α(b), e^{c(b)α(b)} floored, c_d(b)α(b), e^{c_d(b)α(b)} floored)`.
pub const TABLE2: &[(u64, f64, f64, f64, f64)] = &[
    (4, 0.354987, 1.4261, 0.354987, 1.4261),
    (12, 0.536243, 1.7095, 0.479872, 1.6158),
    (24, 0.602065, 1.8258, 0.542689, 1.7206),
    (48, 0.638300, 1.8932, 0.578122, 1.7826),
    (60, 0.646856, 1.9095, 0.552061, 1.7368),
    (96, 0.658201, 1.9313, 0.597849, 1.8182),
    (120, 0.707611, 2.0291, 0.610358, 1.8410),
    (144, 0.704928, 2.0237, 0.631752, 1.8809),
    (210, 0.600981, 1.8239, 0.496559, 1.6430),
    (240, 0.740127, 2.0962, 0.642829, 1.9018),
    (288, 0.723607, 2.0618, 0.650371, 1.9162),
    (420, 0.716176, 2.0465, 0.597434, 1.8174),
    (480, 0.757765, 2.1335, 0.660864, 1.9364),
];

/// Bases with τ(b) ≤ 20; their rows verify in seconds. The two τ = 24
/// bases (420, 480) take minutes and form the slow tier.
pub const TABLE2_FAST_MAX_TAU: u64 = 20;

/// Tolerance for the 6-decimal lower-bound constants.
pub const TABLE2_CONST_TOL: f64 = 5e-7;

/// Series exponent constants at cut k = 30: (Y-sequence, X_i, Y_i).
pub const UB_SERIES_K30: (f64, f64, f64) = (0.1554, 0.2269, 0.3134);
/// The same at k = 100.
pub const UB_SERIES_K100: (f64, f64, f64) = (0.0571, 0.0807, 0.1175);
/// Absolute tolerances for the series constants at k = 30 and k = 100.
pub const UB_SERIES_TOL_K30: f64 = 5e-5;
pub const UB_SERIES_TOL_K100: f64 = 1e-4;

/// Analytic X₀ exponent at k = 30 and its tolerance (the density formula
/// is reconstructed, so the pin is looser than for the series).
pub const X0_ANALYTIC_K30: f64 = 1.9115;
pub const X0_ANALYTIC_TOL: f64 = 1e-3;

/// Admissible window for the analytic total at k = 30.
pub const TOTAL_ANALYTIC_K30: (f64, f64) = (2.6070, 2.6075);

/// Empirical X₀ exponents at n = 10^6 with tolerances, and the
/// corresponding totals.
pub const X0_EMPIRICAL_K30: (f64, f64) = (1.5466, 0.005);
pub const TOTAL_EMPIRICAL_K30: (f64, f64) = (2.2423, 0.01);
pub const X0_EMPIRICAL_K100: (f64, f64) = (1.8709, 0.01);
pub const TOTAL_EMPIRICAL_K100: (f64, f64) = (2.1262, 0.02);
pub const EMPIRICAL_N: u64 = 1_000_000;

/// Density bound from the ratio argument: `(1/42)∏_{p<10^4}(1−1/p)` must
/// exceed `14/10^4`.
pub const RATIO_DENSITY_RHS: f64 = 14.0 / 1e4;
/// The ratio constant `(56/36)^{13/10^4}` must exceed this.
pub const RATIO_C_MIN: f64 = 1.00057;
