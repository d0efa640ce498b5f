pub const TABLE: &[(f64, f64)] = &[
    (-37.5, 4.6053530095819548438e-308),
    (-37.13, 4.6096882929930187787e-302),
    (-36.76, 4.0240949572568745108e-296),
    (-36.39, 3.0637531658329666303e-290),
    (-36.02, 2.0343660938197821103e-284),
    (-35.65, 1.1781352407384048891e-278),
    (-35.28, 5.9504914334078293646e-273),
    (-34.91, 2.6212180399997549827e-267),
    (-34.54, 1.0070408711924331743e-261),
    (-34.17, 3.3743157648962631985e-256),
    (-33.8, 9.8609803787063328614e-251),
    (-33.43, 2.5133404883826580473e-245),
    (-33.06, 5.5870243725702615282e-240),
    (-32.69, 1.0832008561425278463e-234),
    (-32.32, 1.8316303810485346108e-229),
    (-31.95, 2.7012722962232400317e-224),
    (-31.58, 3.4745765447378778049e-219),
    (-31.21, 3.8979813104141961544e-214),
    (-30.84, 3.8140236016190369422e-209),
    (-30.47, 3.254874217168687131e-204),
    (-30.1, 2.4226672179857587657e-199),
    (-29.73, 1.5727641377219643318e-194),
    (-29.36, 8.9052340323064144747e-190),
    (-28.990000000000002, 4.3978525527467162185e-185),
    (-28.62, 1.8943112005708289819e-180),
    (-28.25, 7.1167078839965676758e-176),
    (-27.880000000000003, 2.3319862700000286445e-171),
    (-27.509999999999998, 6.6649030388769680427e-167),
    (-27.14, 1.6614402193067539373e-162),
    (-26.77, 3.6124410050100128395e-158),
    (-26.4, 6.8508455714282386015e-154),
    (-26.03, 1.1332279214479737617e-149),
    (-25.66, 1.6350175922876237813e-145),
    (-25.29, 2.0576057859953132868e-141),
    (-24.92, 2.2585988776033565685e-137),
    (-24.55, 2.1624992521798334252e-133),
    (-24.18, 1.8059910706063580895e-129),
    (-23.810000000000002, 1.3155912875280739537e-125),
    (-23.439999999999998, 8.3594028851062471316e-122),
    (-23.07, 4.6332066433750581978e-118),
    (-22.7, 2.2399774868270470109e-114),
    (-22.33, 9.4463665999225972185e-111),
    (-21.96, 3.4749524407526556114e-107),
    (-21.59, 1.115064057389687623e-103),
    (-21.22, 3.1212015222246022361e-100),
    (-20.85, 7.6211273268271746483e-97),
    (-20.48, 1.6232919832581630406e-93),
    (-20.11, 3.0161917024124828617e-90),
    (-19.740000000000002, 4.8889008019397913985e-87),
    (-19.37, 6.9128781017330946939e-84),
    (-19.0, 8.5272239526309765105e-81),
    (-18.63, 9.1762148524103719626e-78),
    (-18.26, 8.6145581124244431038e-75),
    (-17.89, 7.0554178541901380389e-72),
    (-17.52, 5.041270127625207077e-69),
    (-17.15, 3.1426233492017294736e-66),
    (-16.78, 1.7091806165731692095e-63),
    (-16.41, 8.1102735631084680704e-61),
    (-16.04, 3.3577178415893620284e-58),
    (-15.670000000000002, 1.2128969481900267472e-55),
    (-15.3, 3.8228315620734502237e-53),
    (-14.93, 1.0513305190191012719e-50),
    (-14.559999999999999, 2.5228901762898447308e-48),
    (-14.190000000000001, 5.2829366621851294732e-46),
    (-13.82, 9.6534924045665392726e-44),
    (-13.45, 1.5393615023767871328e-41),
    (-13.080000000000002, 2.1422009730777562485e-39),
    (-12.71, 2.6017220628545755779e-37),
    (-12.34, 2.7577941516989773998e-35),
    (-11.969999999999999, 2.5514313084583266832e-33),
    (-11.600000000000001, 2.0603912361587493894e-31),
    (-11.23, 1.4523927327242006845e-29),
    (-10.86, 8.9374603825760593163e-28),
    (-10.490000000000002, 4.8014196127044192864e-26),
    (-10.120000000000001, 2.2520780995720180778e-24),
    (-9.75, 9.2234135249394181485e-23),
    (-9.379999999999999, 3.2986364230153195261e-21),
    (-9.010000000000002, 1.0302824601955820536e-19),
    (-8.64, 2.8106510652342209924e-18),
    (-8.27, 6.6979506923731768783e-17),
    (-7.899999999999999, 1.3945171466592841519e-15),
    (-7.530000000000001, 2.5370161429998276093e-14),
    (-7.16, 4.0338530489475549801e-13),
    (-6.789999999999999, 5.6066772433156720408e-12),
    (-6.420000000000002, 6.8137172582733311414e-11),
    (-6.050000000000001, 7.2422917051375978065e-10),
    (-5.68, 6.7347371015575308887e-9),
    (-5.310000000000002, 5.4812617480955745581e-8),
    (-4.939999999999998, 3.9061285431833085279e-7),
    (-4.57, 2.4386210737794219897e-6),
    (-4.200000000000003, 0.000013345749015906170827),
    (-3.8299999999999983, 0.000064071629488875005043),
    (-3.460000000000001, 0.00027008769396347382579),
    (-3.0900000000000034, 0.0010007824766139989067),
    (-2.719999999999999, 0.0032640958158913236954),
    (-2.3500000000000014, 0.0093867055348385414848),
    (-1.980000000000004, 0.02385176434150829722),
    (-1.6099999999999994, 0.053698928148119769491),
    (-1.240000000000002, 0.10748769707458654957),
    (-0.8699999999999974, 0.19215020210369689305),
    (-0.5, 0.30853753872598689636),
    (-0.13000000000000256, 0.4482832133454378492),
    (0.240000000000002, 0.59483487169779661784),
    (0.6099999999999994, 0.72906909621699411335),
    (0.9799999999999969, 0.83645694067230688235),
    (1.3500000000000014, 0.91149200856259819345),
    (1.7199999999999989, 0.95728377920867096112),
    (2.0899999999999963, 0.9816911001483408717),
    (2.460000000000001, 0.9930531492113757013),
    (2.8299999999999983, 0.9976725997932684331),
    (3.200000000000003, 0.99931286206208415832),
    (3.5700000000000003, 0.99982150938609515282),
    (3.9399999999999977, 0.9999592591954414489),
    (4.310000000000002, 0.99999183727269723701),
    (4.68, 0.99999856562541557987),
    (5.049999999999997, 0.99999977909496773045),
    (5.420000000000002, 0.99999997020048228946),
    (5.789999999999999, 0.99999999648067878483),
    (6.159999999999997, 0.99999999963627527852),
    (6.530000000000001, 0.99999999996711515432),
    (6.899999999999999, 0.99999999999739987303),
    (7.269999999999996, 0.99999999999982025625),
    (7.640000000000001, 0.99999999999998913891),
    (8.009999999999998, 0.99999999999999942646),
    (8.380000000000003, 0.99999999999999997354),
    (8.75, 0.99999999999999999893),
    (9.119999999999997, 0.99999999999999999996),
    (9.490000000000002, 1.0),
    (9.86, 1.0),
    (10.229999999999997, 1.0),
    (10.600000000000001, 1.0),
    (10.969999999999999, 1.0),
    (11.339999999999996, 1.0),
    (11.71, 1.0),
    (12.079999999999998, 1.0),
    (12.450000000000003, 1.0),
    (12.82, 1.0),
    (13.189999999999998, 1.0),
    (13.560000000000002, 1.0),
    (13.93, 1.0),
    (14.299999999999997, 1.0),
    (14.670000000000002, 1.0),
    (15.04, 1.0),
    (15.409999999999997, 1.0),
    (15.780000000000001, 1.0),
    (16.15, 1.0),
    (16.519999999999996, 1.0),
    (16.89, 1.0),
    (17.259999999999998, 1.0),
    (17.630000000000003, 1.0),
    (18.0, 1.0),
    (18.369999999999997, 1.0),
    (18.740000000000002, 1.0),
    (19.11, 1.0),
    (19.479999999999997, 1.0),
    (19.85, 1.0),
    (20.22, 1.0),
    (20.589999999999996, 1.0),
    (20.96, 1.0),
    (21.33, 1.0),
    (21.700000000000003, 1.0),
    (22.07, 1.0),
    (22.439999999999998, 1.0),
    (22.810000000000002, 1.0),
    (23.18, 1.0),
    (23.549999999999997, 1.0),
    (23.92, 1.0),
    (24.29, 1.0),
    (24.659999999999997, 1.0),
    (25.03, 1.0),
    (25.4, 1.0),
    (25.769999999999996, 1.0),
    (26.14, 1.0),
    (26.510000000000005, 1.0),
    (26.879999999999995, 1.0),
    (27.25, 1.0),
    (27.620000000000005, 1.0),
    (27.989999999999995, 1.0),
    (28.36, 1.0),
    (28.730000000000004, 1.0),
    (29.099999999999994, 1.0),
    (29.47, 1.0),
    (29.840000000000003, 1.0),
    (30.209999999999994, 1.0),
    (30.58, 1.0),
    (30.950000000000003, 1.0),
    (31.319999999999993, 1.0),
    (31.689999999999998, 1.0),
    (32.06, 1.0),
    (32.42999999999999, 1.0),
    (32.8, 1.0),
    (33.17, 1.0),
    (33.53999999999999, 1.0),
    (33.91, 1.0),
    (34.28, 1.0),
    (34.650000000000006, 1.0),
    (35.019999999999996, 1.0),
    (35.39, 1.0),
    (35.760000000000005, 1.0),
    (36.129999999999995, 1.0),
    (36.5, 1.0),
    (36.870000000000005, 1.0),
    (37.239999999999995, 1.0),
    (37.61, 1.0),
    (37.980000000000004, 1.0),
    (38.349999999999994, 1.0),
    (38.72, 1.0),
    (39.09, 1.0),
    (39.459999999999994, 1.0),
    (39.83, 1.0),
    (40.2, 1.0),
    (40.56999999999999, 1.0),
    (40.94, 1.0),
    (41.31, 1.0),
    (41.67999999999999, 1.0),
    (42.05, 1.0),
    (42.42, 1.0),
    (42.78999999999999, 1.0),
    (43.16, 1.0),
    (43.53, 1.0),
];
