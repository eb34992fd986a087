"""Reference values for the exponential-kernel example, transcribed from
Table 1 and the printed monomial expansions of the source article."""

GRID = [k / 10 for k in range(11)]

EXACT = [
    -0.1855612526, -0.2050768999, -0.2266450257, -0.2504814912, -0.2768248595,
    -0.3059387842, -0.3381146470, -0.3736744748, -0.4129741624, -0.4564070342,
    -0.5044077810,
]

APPROX = {
    3: [-0.1853868426, -0.2051159200, -0.2267185494, -0.2505049431, -0.2767853131,
        -0.3058698717, -0.3380688310, -0.3736924032, -0.4130508005, -0.4564542350,
        -0.5042129189],
    4: [-0.1855710208, -0.2050729963, -0.2266433924, -0.2504841199, -0.2768280330,
        -0.3059389289, -0.3381115484, -0.3736715751, -0.4129756359, -0.4564113012,
        -0.5043970842],
    5: [-0.1855610006, -0.2050770088, -0.2266449063, -0.2504813833, -0.2768249425,
        -0.3059389458, -0.3381146594, -0.3736743009, -0.4129740843, -0.4564072670,
        -0.5044071950],
    6: [-0.1855612694, -0.2050768958, -0.2266450312, -0.2504814909, -0.2768248544,
        -0.3059387842, -0.3381146522, -0.3736744750, -0.4129741564, -0.4564070387,
        -0.5044077618],
}

ERROR = {
    3: [0.000940, 0.000190, 0.000324, 0.000094, 0.000143, 0.000225, 0.000136,
        0.000048, 0.000186, 0.000103, 0.000386],
    4: [5.264169e-5, 1.903450e-5, 7.206563e-6, 1.049471e-5, 1.146363e-5, 4.732287e-7,
        9.164287e-6, 7.760090e-6, 3.568115e-6, 9.349075e-6, 2.120664e-5],
    5: [2.405587e-6, 8.649860e-7, 3.273606e-7, 5.420754e-7, 1.162778e-7, 4.731259e-7,
        1.259522e-7, 3.620806e-7, 2.074285e-7, 4.075118e-7, 9.560245e-7],
    6: [9.049198e-8, 1.990287e-8, 2.425409e-8, 9.600473e-10, 1.846251e-8, 7.752014e-11,
        1.554022e-8, 5.635104e-10, 1.441928e-8, 9.997793e-9, 3.797784e-8],
}

# ascending-degree monomial coefficients of the printed approximations
MONOMIAL = {
    3: [-0.185387, -0.188957, -0.078167, -0.051702],
    4: [-0.185571, -0.185273, -0.0947437, -0.025916, -0.012893],
    5: [-0.185561, -0.18558, -0.0925986, -0.0316362, -0.00645779, -0.00257408],
    6: [-0.185561, -0.18556, -0.0925932, -0.0308581, -0.00791665, -0.0012903, -0.000427923],
}
