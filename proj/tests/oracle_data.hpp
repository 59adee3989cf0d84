#pragma once

// Generated by tests/oracle_gen.py -- do not edit by hand.
// Reference values computed with numpy/scipy and Python's zlib.

#include <array>
#include <cstddef>

namespace oracle {

inline constexpr std::array<double, 64> kX64 = {
    -0.70927200000000001, 0.032987000000000002, 1.1712199999999999, 0.45930100000000001,
    -0.677782, -1.810281, -0.88705299999999998, -0.92826900000000001,
    0.213503, 1.1582079999999999, -1.606984, 0.35997699999999999,
    -0.84777999999999998, 1.4020010000000001, 1.5523039999999999, 0.373112,
    1.14225, 0.74424299999999999, -0.78886599999999996, -0.90529099999999996,
    -0.15262500000000001, 1.8669210000000001, -1.4309000000000001, -0.74473900000000004,
    -2.5711750000000002, 1.7531920000000001, 1.4030549999999999, 2.1136710000000001,
    -0.72352300000000003, -0.76099600000000001, -0.91504700000000005, 2.4547379999999999,
    1.998149, 0.13047400000000001, -1.0869549999999999, -0.78195099999999995,
    1.367489, 1.830328, 0.17894499999999999, -1.0254749999999999,
    0.15307799999999999, 1.1462829999999999, -0.75193600000000005, 0.20874000000000001,
    0.18334400000000001, -1.248024, 1.9924230000000001, 0.030005,
    -1.30026, 1.201468, 1.077529, 0.011043000000000001,
    -1.7558180000000001, 1.335159, 0.77175700000000003, 0.24015500000000001,
    0.89696399999999998, 1.923651, -0.17355499999999999, 0.21696799999999999,
    -0.64320900000000003, 0.67515000000000003, 0.269594, -1.028329
};
inline constexpr std::array<double, 64> kY64 = {
    -0.77044199999999996, 0.166433, 1.1607160000000001, 0.88950799999999997,
    -0.74773800000000001, -2.0896469999999998, -1.0150650000000001, -1.150045,
    -0.102061, 1.373475, -1.2555050000000001, 0.64121600000000001,
    -0.90484699999999996, 1.6047169999999999, 1.8756429999999999, 0.172319,
    1.101335, 1.132031, -0.82453699999999996, -0.91827099999999995,
    -0.591279, 1.9052519999999999, -1.5451330000000001, -0.605877,
    -2.7363029999999999, 1.6009899999999999, 1.496534, 2.3068930000000001,
    -0.358732, -0.85437200000000002, -0.89504899999999998, 1.89849,
    2.102268, 0.27236900000000003, -1.836805, -0.44783400000000001,
    1.602811, 1.5522670000000001, 0.149869, -0.90034800000000004,
    -0.46949800000000003, 0.98909599999999998, -0.68734200000000001, 0.16961499999999999,
    -0.33239600000000002, -1.5963050000000001, 1.8595330000000001, 0.063818,
    -1.3945669999999999, 0.67093499999999995, 0.875834, 0.00067299999999999999,
    -1.733854, 1.7019359999999999, 1.195703, 0.390266,
    0.85507999999999995, 2.4168639999999999, -0.019199000000000001, 0.28816599999999998,
    -1.0408919999999999, 0.48955799999999999, 0.46498099999999998, -0.81081199999999998
};
inline constexpr std::array<double, 16> kX16 = {
    -1.6282289999999999, 1.133432, 0.72817399999999999, 0.018839000000000002,
    1.0064059999999999, 1.7759579999999999, 1.0942940000000001, -0.46308700000000003,
    1.826956, -0.97495299999999996, -1.422088, -0.57209299999999996,
    1.2000420000000001, -1.207014, 0.28076200000000001, -0.020816999999999999
};
inline constexpr std::array<double, 10> kPairA = {
    -0.97880100000000003, 0.48550700000000002, 1.359173, -1.577426,
    0.560284, 0.38437399999999999, -0.21942200000000001, -0.402665,
    0.18165500000000001, 1.0115400000000001
};
inline constexpr std::array<double, 10> kPairB = {
    -0.63478199999999996, 0.45003399999999999, 0.24497099999999999, -0.75492400000000004,
    -0.18532499999999999, 0.15820799999999999, -0.137131, -0.51637,
    -0.52656899999999995, 1.6263890000000001
};
inline constexpr std::array<double, 10> kTiesA = {
    1, 2, 2, 3,
    4, 4, 4, 5,
    6, 7
};
inline constexpr std::array<double, 10> kTiesB = {
    2, 1, 3, 3,
    5, 4, 6, 5,
    8, 7
};

inline constexpr std::array<double, 11> kFirTapsOrder10Cut01 = {
    7.3914231509637286e-19, 0.0093042831450181468, 0.04757776613441745, 0.12236354636114467,
    0.20224655842984032, 0.23701569185915894, 0.20224655842984032, 0.12236354636114467,
    0.04757776613441745, 0.0093042831450181468, 7.3914231509637286e-19
};
inline constexpr std::array<double, 24> kFiltfiltX64Mid = {
    -0.1479149873662241, -0.23342112347293298, -0.26420389136345362, -0.20596036339681553,
    -0.050357448378539553, 0.15419349774736527, 0.32533232152229913, 0.40998969730752999,
    0.42449604353160092, 0.42766468368451199, 0.45566730527983096, 0.4897165154085138,
    0.48831768370080592, 0.44163675757819632, 0.38407028030424167, 0.35461017032469477,
    0.35487448968735696, 0.35146865409794725, 0.31397624965426063, 0.24314566852597866,
    0.16402556865609924, 0.10127980327598958, 0.065516019434476658, 0.05679384781727536
};
inline constexpr std::size_t kFiltfiltMidOffset = 20;

inline constexpr std::array<double, 9> kWelchX64N16 = {
    0.041602494776425046, 0.18732891329471549, 0.39217821575626027, 0.76494781930810996,
    0.48767736499944486, 0.30522369367272362, 0.19133592911125305, 0.2736867098954483,
    0.18463705984264581
};
inline constexpr std::array<double, 17> kWelchX64N32 = {
    0.010838946107384865, 0.10868453205248037, 0.24260727591363321, 0.13684903411157265,
    0.052077599117886807, 0.70687505789911231, 1.2170023868755655, 0.82182813711033897,
    0.45686258247944461, 0.32486637852940453, 0.39651219576032987, 0.17206236948940679,
    0.15859489761274895, 0.30007173592096154, 0.27033454003488361, 0.21110888118284973,
    0.24299537018753156
};
inline constexpr double kWelchFs = 8;

inline constexpr std::array<double, 32> kEnvelopeX32 = {
    1.9903324980163593, 1.2460651625497507, 1.3740193670821879, 1.1718664984230758,
    1.9008851375407325, 1.8318510185578532, 1.0937470722470966, 1.0659322162418556,
    1.8073474026782168, 1.469898543286462, 1.6171350316490249, 0.94718722083181406,
    1.1757028105278728, 2.3659158596093888, 1.6261909992552985, 0.45323020927180885,
    1.1434243431888744, 1.8264308555702513, 1.0892164930462582, 0.99579284598743234,
    1.6928644911477286, 2.2608774310561981, 1.7522564230410225, 0.95000657996142079,
    3.0714663360152428, 3.0715445181471677, 1.4232263672895027, 2.3033016919708724,
    1.9304418148838256, 0.7725103050883142, 1.5931019319227924, 2.4944046325556588
};

inline constexpr std::array<double, 14> kPeakSignal = {
    0, 1, 0.5, 2,
    2, 2, 1, 3,
    1, 1, 2.5, 2.5,
    0, 4
};
inline constexpr std::array<std::size_t, 4> kPeakIndices = {1, 4, 7, 10};

inline constexpr double kSkewX16 = -0.12432772809443805;
inline constexpr double kKurtX16 = 1.7484371456512884;
inline constexpr double kPearsonAB = 0.72637295768351984;
inline constexpr double kSpearmanAB = 0.83030303030303021;
inline constexpr double kSpearmanTies = 0.91335208976456661;
inline constexpr double kQuantileX16_10 = -1.314551;
inline constexpr double kQuantileX16_25 = -0.67280799999999996;
inline constexpr double kQuantileX16_50 = 0.1498005;
inline constexpr double kQuantileX16_90 = 1.488;

inline constexpr double kKendallAB = 0.68888888888888877;
inline constexpr double kKendallTies = 0.78593708857874267;

inline constexpr double kChi2Sf_0p5_df2 = 0.77880078307140488;
inline constexpr double kChi2Sf_3p841458820694124_df1 = 0.049999999999999892;
inline constexpr double kChi2Sf_12p3_df7 = 0.091114886000313103;
inline constexpr double kChi2Sf_45p0_df26 = 0.011771095231697398;
inline constexpr double kChi2Sf_130p5_df129 = 0.44650098747278877;

inline constexpr double kFriedmanPlainStat = 0.5;
inline constexpr double kFriedmanPlainP = 0.77880078307140488;
inline constexpr std::array<double, 24> kFriedmanTiesMatrix = {
    0.5, 0.5, 0.69999999999999996, 0.90000000000000002,
    0.59999999999999998, 0.59999999999999998, 0.59999999999999998, 0.80000000000000004,
    0.40000000000000002, 0.5, 0.59999999999999998, 0.69999999999999996,
    0.90000000000000002, 0.80000000000000004, 0.80000000000000004, 0.94999999999999996,
    0.55000000000000004, 0.59999999999999998, 0.65000000000000002, 0.59999999999999998,
    0.69999999999999996, 0.69999999999999996, 0.75, 0.84999999999999998
};
inline constexpr std::size_t kFriedmanTiesRows = 6;
inline constexpr std::size_t kFriedmanTiesCols = 4;
inline constexpr double kFriedmanTiesStat = 11.480769230769234;
inline constexpr double kFriedmanTiesP = 0.0093909677488221242;

inline constexpr double kAnovaF3Groups = 40.666666666666629;

inline constexpr std::array<double, 29> kNemenyiQ05 = {
    1.9599639845400534, 2.3437005863784091, 2.5690317725464822, 2.7277743708703763,
    2.8497054196100016, 2.9483200175296744, 3.0308784496144132, 3.1017303413033805,
    3.1636835770533729, 3.2186536073291525, 3.2680039244661421, 3.31273859335082,
    3.3536177518523043, 3.3912302837652568, 3.4260413793706097, 3.4584247073473247,
    3.4886847993791976, 3.5170730086918112, 3.5437991315177815, 3.5690400299507057,
    3.5929461369847888, 3.6156464372267112, 3.6372523316885754, 3.6578606730719927,
    3.6775561758530779, 3.6964133491850126, 3.7144980613753007, 3.7318688168865739,
    3.7485778068309838
};

inline constexpr double kNcdX64Y64 = 0.95700934579439256;

inline constexpr double kJsdX64Y64Bins8 = 0.0052786114281077878;
inline constexpr double kJsdX64Y64Bins64 = 0.31733332753867916;

}  // namespace oracle
