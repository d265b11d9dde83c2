//! Partial-fraction coefficients of the best (k, k) rational approximation
//! of `e^x` on the negative real axis, rounded to 20 significant digits.
//! Each pole is the representative of its conjugate pair with positive
//! imaginary part; residues pair with poles by index.

pub(super) struct Table {
    pub order: usize,
    pub alpha0: &'static str,
    /// `(re, im)` per pole.
    pub poles: &'static [(&'static str, &'static str)],
    /// `(re, im)` per residue.
    pub residues: &'static [(&'static str, &'static str)],
}

pub(super) const ORDER_14: Table = Table {
    order: 14,
    alpha0: "1.8321743782540412751e-14",
    poles: &[
        ("-8.8977731864688888199e0", "1.6630982619902085304e1"),
        ("-3.7032750494234480603e0", "1.3656371871483268171e1"),
        ("-0.2087586382501301251e0", "1.0991260561901260913e1"),
        ("3.9933697105785685194e0", "6.0048316422350373178e0"),
        ("5.0893450605806245066e0", "3.5888240290270065102e0"),
        ("5.6231425727459771248e0", "1.1940690463439669766e0"),
        ("2.2697838292311127097e0", "8.4617379730402214019e0"),
    ],
    residues: &[
        ("-7.1542880635890672853e-5", "1.4361043349541300111e-4"),
        ("9.4390253107361688779e-3", "-1.7184791958483017511e-2"),
        ("-3.7636003878226968717e-1", "3.3518347029450104214e-1"),
        ("-2.3498232091082701191e1", "-5.8083591297142074004e0"),
        ("4.6933274488831293047e1", "4.5643649768827760791e1"),
        ("-2.7875161940145646468e1", "-1.0214733999056451434e2"),
        ("4.8071120988325088907e0", "-1.3209793837428723881e0"),
    ],
};

pub(super) const ORDER_16: Table = Table {
    order: 16,
    alpha0: "2.1248537104952237488e-16",
    poles: &[
        ("-1.0843917078696988026e1", "1.9277446167181652284e1"),
        ("-5.2649713434426468895e0", "1.6220221473167927305e1"),
        ("5.9481522689511774808e0", "3.5874573620183222829e0"),
        ("3.5091036084149180974e0", "8.4361989858843750826e0"),
        ("6.4161776990994341923e0", "1.1941223933701386874e0"),
        ("1.4193758971856659786e0", "1.0925363484496722585e1"),
        ("4.9931747377179963991e0", "5.9968817136039422260e0"),
        ("-1.4139284624888862114e0", "1.3497725698892745389e1"),
    ],
    residues: &[
        ("-5.0901521865224915650e-7", "-2.4220017652852287970e-5"),
        ("2.1151742182466030907e-4", "4.3892969647380673918e-3"),
        ("1.1339775178483930527e2", "1.0194721704215856450e2"),
        ("1.5059585270023467528e1", "-5.7514052776421819979e0"),
        ("-6.4500878025539646595e1", "-2.2459440762652096056e2"),
        ("-1.4793007113557999718e0", "1.7686588323782937906e0"),
        ("-6.2518392463207918892e1", "-1.1190391094283228480e1"),
        ("4.1023136835410021273e-2", "-1.5743466173455468191e-1"),
    ],
};
