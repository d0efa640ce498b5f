// (mu_x1, sigma_xx1, mu_x0, sigma_xx0, pi, phi) -> (mu_u0, sigma_uu0, mu_y),
// evaluated at 40 significant digits from the exact binary inputs.
pub const ADJUST_ORACLE: [([f64; 6], [f64; 3]); 35] = [
    (
        [
            0.0,
            0.3333333333333333,
            -0.5773502691896257,
            0.3333333333333333,
            0.0,
            0.0,
        ],
        [-0.4999999999999999745, 1.0, 0.30853753872598690534],
    ),
    (
        [
            0.0,
            0.3333333333333333,
            -0.5773502691896257,
            0.3333333333333333,
            0.0,
            0.25,
        ],
        [-0.71428571428571425736, 1.0, 0.23752526202697650955],
    ),
    (
        [
            0.0,
            0.3333333333333333,
            -0.5773502691896257,
            0.3333333333333333,
            0.0,
            0.5,
        ],
        [-0.99999999999999996982, 1.0, 0.15865525393145705872],
    ),
    (
        [
            0.0,
            0.3333333333333333,
            -0.5773502691896257,
            0.3333333333333333,
            0.0,
            0.75,
        ],
        [-1.3999999999999999711, 1.0, 0.080756659233771050828],
    ),
    (
        [
            0.0,
            0.3333333333333333,
            -0.5773502691896257,
            0.3333333333333333,
            0.0,
            1.0,
        ],
        [-1.9999999999999999813, 1.0, 0.022750131948179208212],
    ),
    (
        [0.8, 0.25, 0.3, 0.3, 0.07, 0.0],
        [
            0.26832815729997475364,
            1.0399999999999999911,
            0.61490645652040712072,
        ],
    ),
    (
        [0.8, 0.25, 0.3, 0.3, 0.07, 0.25],
        [
            0.03625666598178908599,
            1.092285645834706552,
            0.531268830637722928,
        ],
    ),
    (
        [0.8, 0.25, 0.3, 0.3, 0.07, 0.5],
        [
            -0.28445824720006736845,
            1.1999999999999999556,
            0.42312910925619792548,
        ],
    ),
    (
        [0.8, 0.25, 0.3, 0.3, 0.07, 0.75],
        [
            -0.75659420219964681369,
            1.4334368540005046324,
            0.29865446429273955121,
        ],
    ),
    (
        [0.8, 0.25, 0.3, 0.3, 0.07, 1.0],
        [
            -1.5205262246998572021,
            1.999999999999999778,
            0.1846683411743846185,
        ],
    ),
    (
        [-0.4, 1.0, 0.1, 1.2, 0.2, 0.0],
        [
            0.070710678118654756365,
            1.0999999999999999778,
            0.49923079761343085388,
        ],
    ),
    (
        [-0.4, 1.0, 0.1, 1.2, 0.2, 0.25],
        [
            0.13814871396610924469,
            1.1417870249092792504,
            0.51887746495281498726,
        ],
    ),
    (
        [-0.4, 1.0, 0.1, 1.2, 0.2, 0.5],
        [
            0.21715728752538100229,
            1.1999999999999999556,
            0.54058575200373719607,
        ],
    ),
    (
        [-0.4, 1.0, 0.1, 1.2, 0.2, 0.75],
        [
            0.3109936088814353211,
            1.2821132612493527441,
            0.56429736578792704991,
        ],
    ),
    (
        [-0.4, 1.0, 0.1, 1.2, 0.2, 1.0],
        [
            0.42426406871192853819,
            1.3999999999999999112,
            0.58976259980117358075,
        ],
    ),
    (
        [1.2, 0.09, 0.9, 0.12, 0.05, 0.0],
        [
            0.86204365669903627596,
            1.0275229357798165128,
            0.80607163302081514528,
        ],
    ),
    (
        [1.2, 0.09, 0.9, 0.12, 0.05, 0.25],
        [
            0.58296422105771384362,
            1.1069466367368315293,
            0.71846871312967068732,
        ],
    ),
    (
        [1.2, 0.09, 0.9, 0.12, 0.05, 0.5],
        [
            0.14939154226538183393,
            1.3333333333333333333,
            0.56763689788368731686,
        ],
    ),
    (
        [1.2, 0.09, 0.9, 0.12, 0.05, 0.75],
        [
            -0.61606002152557501031,
            2.0389397413639785045,
            0.36016051395324163608,
        ],
    ),
    (
        [1.2, 0.09, 0.9, 0.12, 0.05, 1.0],
        [
            -2.3307106273714677803,
            5.0370370370370371741,
            0.18578589144993079963,
        ],
    ),
    (
        [0.5, 2.0, 0.5, 2.0, 0.5, 0.0],
        [0.28867513459481288225, 1.0, 0.61358500365777625176],
    ),
    (
        [0.5, 2.0, 0.5, 2.0, 0.5, 0.25],
        [0.28867513459481288225, 1.0, 0.61358500365777625176],
    ),
    (
        [0.5, 2.0, 0.5, 2.0, 0.5, 0.5],
        [0.28867513459481288225, 1.0, 0.61358500365777625176],
    ),
    (
        [0.5, 2.0, 0.5, 2.0, 0.5, 0.75],
        [0.28867513459481288225, 1.0, 0.61358500365777625176],
    ),
    (
        [0.5, 2.0, 0.5, 2.0, 0.5, 1.0],
        [0.28867513459481288225, 1.0, 0.61358500365777625176],
    ),
    (
        [0.3, 0.04, -0.1, 0.05, 0.01, 0.0],
        [
            -0.098058067569092021366,
            1.0096153846153846172,
            0.46267451656675992278,
        ],
    ),
    (
        [0.3, 0.04, -0.1, 0.05, 0.01, 0.25],
        [
            -0.69974988406304393038,
            1.0617428181413884222,
            0.25220903002284717142,
        ],
    ),
    (
        [0.3, 0.04, -0.1, 0.05, 0.01, 0.5],
        [
            -1.7058257972927239145,
            1.2500000000000000434,
            0.069059190079113244393,
        ],
    ),
    (
        [0.3, 0.04, -0.1, 0.05, 0.01, 0.75],
        [
            -3.7302780197936322482,
            2.0122634806995314876,
            0.010387717888844594756,
        ],
    ),
    (
        [0.3, 0.04, -0.1, 0.05, 0.01, 1.0],
        [
            -9.9038648244782932734,
            7.5000000000000009975,
            0.006304758073451814886,
        ],
    ),
    (
        [-1.0, 0.6, -1.5, 0.4, 0.3, 0.0],
        [
            -1.1858541225631422577,
            0.87500000000000002602,
            0.13609215790178487815,
        ],
    ),
    (
        [-1.0, 0.6, -1.5, 0.4, 0.3, 0.25],
        [
            -1.2975357867357988577,
            0.79438807837737695783,
            0.11528565332855285646,
        ],
    ),
    (
        [-1.0, 0.6, -1.5, 0.4, 0.3, 0.5],
        [
            -1.4360666394099976646,
            0.66666666666666672835,
            0.091892407763679984437,
        ],
    ),
    (
        [-1.0, 0.6, -1.5, 0.4, 0.3, 0.75],
        [
            -1.61245167376991025,
            0.45960764223077155028,
            0.070464338070260842597,
        ],
    ),
    (
        [-1.0, 0.6, -1.5, 0.4, 0.3, 1.0],
        [
            -1.8446619684315546475,
            0.11111111111111125503,
            0.064379306022247273424,
        ],
    ),
];
