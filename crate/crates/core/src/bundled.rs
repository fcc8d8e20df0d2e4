//! Polynomials shipped with the crate: F16, F40, Kondrat'ev's k8 and the
//! degree-4 polynomials `(b1 + cos φ)²(b2 + cos φ)²` of the historical record.

use crate::error::{Error, Result};
use crate::polyfile::PolyFile;
use crate::trigpoly::{cosine_product, CosinePolynomial, SpectralFactor};

/// First 1000 zeta-zero ordinates.
pub const ZEROS_1000: &str = include_str!("../data/zeros_1000.txt");

pub const F16_TAIL: f64 = 3.523323140225021;
pub const F40_TAIL: f64 = 3.490002852278399;
pub const K8_TAIL: f64 = 3.465567070455195;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Historical {
    pub name: &'static str,
    pub year: u16,
    pub r0: f64,
    pub b1: f64,
    pub b2: Option<f64>,
}

pub const HISTORICAL: [Historical; 7] = [
    Historical { name: "vallee-poussin-1899", year: 1899, r0: 30.4679, b1: 1.0, b2: None },
    Historical { name: "westphal-1938", year: 1938, r0: 17.537, b1: 1.0, b2: Some(0.25) },
    Historical { name: "rosser-schoenfeld-1962", year: 1962, r0: 17.51631, b1: 1.0, b2: Some(0.3) },
    Historical { name: "stechkin-1970", year: 1970, r0: 9.65, b1: 0.91, b2: Some(0.28) },
    Historical { name: "rosser-schoenfeld-1975", year: 1975, r0: 9.64591, b1: 1.0, b2: Some(0.3) },
    Historical { name: "ford-2002", year: 2002, r0: 8.463, b1: 0.9, b2: Some(0.225) },
    Historical { name: "kadiri-2005", year: 2005, r0: 5.69693, b1: 0.91, b2: Some(0.265) },
];

/// `(b1 + cos φ)² (b2 + cos φ)²` (or `(b1 + cos φ)²` alone), normalised to `a_0 = 1`.
pub fn historical_poly(b1: f64, b2: Option<f64>) -> CosinePolynomial {
    let lin = |b: f64| CosinePolynomial::new(vec![b, 1.0]).expect("two coefficients");
    let sq = |b: f64| cosine_product(&lin(b), &lin(b));
    let p = match b2 {
        Some(b2) => cosine_product(&sq(b1), &sq(b2)),
        None => sq(b1),
    };
    p.normalized()
}

pub fn f16() -> PolyFile {
    PolyFile::from_factor(SpectralFactor::new(F16_C.to_vec()).expect("valid factor"))
}

pub fn f40() -> PolyFile {
    PolyFile::from_factor(SpectralFactor::new(F40_C.to_vec()).expect("valid factor"))
}

pub fn k8() -> PolyFile {
    PolyFile::from_cosine(CosinePolynomial::new(K8_A.to_vec()).expect("valid coefficients"))
}

/// Every bundled polynomial with its lookup name.
pub fn all() -> Vec<(&'static str, PolyFile)> {
    let mut out = vec![("f16", f16()), ("f40", f40()), ("k8", k8())];
    for h in HISTORICAL {
        out.push((h.name, PolyFile::from_cosine(historical_poly(h.b1, h.b2))));
    }
    out
}

pub fn by_name(name: &str) -> Result<PolyFile> {
    all()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, p)| p)
        .ok_or_else(|| Error::Domain(format!("no bundled polynomial named {name:?}")))
}

/// Spectral factor of F16.
pub const F16_C: [f64; 17] = [
    1.0,
    -2.09100370089199,
    0.414661861733616,
    4.94973437766435,
    -2.26052224951171,
    -8.58599241204357,
    6.87053689828658,
    22.6412990090005,
    -6.76222005424994,
    -50.2233943767588,
    8.07550113395201,
    223.771572768515,
    487.278135806977,
    597.268928658734,
    473.937203439807,
    237.271715181426,
    59.6961898512813,
];

/// Printed normalised cosine coefficients of F16.
pub const F16_A: [f64; 17] = [
    1.0,
    1.74126664022806,
    1.128282822804652,
    0.5065272432186642,
    0.1253566902628852,
    9.35696526707405e-13,
    4.546614790384321e-13,
    0.01201214561729989,
    0.006875849760911001,
    7.77030543093611e-12,
    2.846662294985367e-7,
    0.001608306592372963,
    0.001017994683287104,
    2.838909054508971e-7,
    5.482482041999887e-6,
    2.412958794855076e-4,
    1.281001290654868e-4,
];

/// Spectral factor of F40.
pub const F40_C: [f64; 41] = [
    1.0,
    5.82299804516981,
    20.256046857268,
    41.8371543572416,
    62.6803646661328,
    86.3371461181984,
    140.237920299854,
    230.172136828422,
    296.566863709684,
    259.103949548556,
    115.007833826561,
    -36.3610468402636,
    -95.0264057388131,
    -58.142464967588,
    -2.7847512808475,
    17.2100840100492,
    10.7193028056306,
    5.04620845731704,
    3.86024903930945,
    -0.321719428284046,
    -4.25534268200327,
    -2.73295949107489,
    1.31013188826865,
    1.16950963394944,
    -0.36353468679768,
    -0.468164164916908,
    0.940864822848766,
    0.224723973462492,
    -0.762490754252658,
    -0.100627491842387,
    0.486777412937381,
    -0.00593275691352972,
    -0.399968301710688,
    0.225086077352437,
    0.198770260275958,
    -0.239235383947936,
    -0.0483116501842605,
    0.212556439828151,
    -0.124475686268429,
    0.0123641022008911,
    0.0146979855952472,
];

/// Printed normalised cosine coefficients of F40.
pub const F40_A: [f64; 41] = [
    1.0,
    1.737404932358421,
    1.1180312174988238,
    0.4958068290777618,
    0.12043435038423943,
    2.8862586376137162e-15,
    2.0972266792962233e-7,
    0.010264161325212823,
    0.005445447694684562,
    4.982862012828773e-14,
    4.8092823793119544e-8,
    6.247326172856939e-4,
    1.625564268382144e-12,
    2.835025226384611e-7,
    6.129588083976596e-4,
    5.231422915759923e-4,
    4.936509000300511e-8,
    1.4092336429708759e-13,
    2.923444923088646e-4,
    2.3484834215069657e-4,
    1.1342395284997809e-7,
    9.170949177475853e-15,
    1.1678447544116879e-4,
    8.482954015115613e-5,
    5.338369918854597e-12,
    1.8115431364172399e-6,
    2.274822660800113e-5,
    6.894175279654467e-14,
    1.570310005695605e-7,
    3.090195669976266e-5,
    2.75304675142816e-5,
    4.959939074564098e-8,
    2.6604018245602642e-14,
    1.643513306111948e-5,
    1.522818206748077e-5,
    4.623133724479399e-6,
    7.930664147911865e-7,
    2.6276458478038436e-6,
    1.8249928742340992e-6,
    7.289034419080702e-7,
    1.0937584248561976e-7,
];

/// Kondrat'ev's degree-8 polynomial, normalised cosine coefficients.
pub const K8_A: [f64; 9] = [
    1.0,
    1.733792817542616,
    1.110484293773627,
    0.4895739485699287,
    0.1180328991868943,
    7.549474144412732e-9,
    7.994175811779779e-10,
    0.009253861629263798,
    0.004429241403972788,
];

/// Printed rows of the R0 iteration for F16: R, r, η0·10³, η1·10³, κ, δ, R0.
pub const TRACE_GOLDEN: [[f64; 7]; 7] = [
    [5.7000000, 5.58682, 7.41347, 0.861315, 0.440100, 0.620251, 5.5868212],
    [5.5868212, 5.57486, 7.42938, 0.876546, 0.439964, 0.620293, 5.5748558],
    [5.5748558, 5.57357, 7.43109, 0.878187, 0.439949, 0.620298, 5.5735676],
    [5.5735676, 5.57343, 7.43128, 0.878364, 0.439948, 0.620298, 5.5734286],
    [5.5734286, 5.57341, 7.43130, 0.878383, 0.439948, 0.620298, 5.5734136],
    [5.5734136, 5.57341, 7.43130, 0.878385, 0.439948, 0.620298, 5.5734120],
    [5.5734120, 5.57341, 7.43130, 0.878386, 0.439948, 0.620298, 5.5734118],
];
/// Decimal places printed in each column of [`TRACE_GOLDEN`].
pub const TRACE_DECIMALS: [i32; 7] = [7, 5, 5, 6, 6, 6, 7];
pub const TRACE_COLUMNS: [&str; 7] = ["R", "r", "eta0_e3", "eta1_e3", "kappa", "delta", "R0"];

/// Records for `n = 4m`: degree, bound on V_n, θ, resulting R0.
pub const VN_TABLE: [(usize, f64, f64, f64); 9] = [
    (8, 34.53991919, 1.853, 5.58139),
    (12, 34.50266054, 1.855, 5.57429),
    (16, 34.49747009, 1.855, 5.57490),
    (20, 34.49321564, 1.855, 5.57495),
    (24, 34.49027559, 1.855, 5.57519),
    (28, 34.48959029, 1.855, 5.57560),
    (32, 34.48939230, 1.855, 5.57632),
    (36, 34.48930967, 1.855, 5.57683),
    (40, 34.488992001, 1.855, 5.57724),
];
