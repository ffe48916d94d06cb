"""Printed reference formulas, kept verbatim as parseable strings.

The growth rate is spelled ``x``.  Finite cases are keyed "lm" (e.g. "11");
the three symbolic families are "l1" = (l, l-1), "l2" = (l, l), "l3" = (l, l+1).
Every derived quantity in the engine is compared against these entries.
"""

from __future__ import annotations

FINITE_CASES = ("10", "11", "12", "21", "22", "23", "32", "33")
FAMILIES = ("l1", "l2", "l3")
FAMILY_OFFSET = {"l1": -1, "l2": 0, "l3": 1}

# Thresholds on l for the error bounds and the Wall data of each family.
BOUND_THRESHOLD = {"l1": 4, "l2": 4, "l3": 3}
WALL_THRESHOLD = {"l1": 3, "l2": 4, "l3": 2}
QUASI_THRESHOLD = 3

# l-shifts of the supplementary polynomials: coefficient bounds, initial error.
COEFF_L_SHIFT = {"l1": 4, "l2": 4, "l3": 3}
ERROR_L_SHIFT = {"l1": 0, "l2": 4, "l3": 2}

# ---------------------------------------------------------------------------
# Heun form: p and q of the equation for psi
# ---------------------------------------------------------------------------

HEUN_P = {
    "10": "7/(2*z) + x/(z-1) + 1/(2*(z-2))",
    "11": "7/(2*z) + x/(z-1) - 1/(2*(z-2))",
    "21": "9/(2*z) + x/(z-1) + 1/(2*(z-2))",
    "generic": "(2*l+3)/(2*z) + x/(z-1) + 1/(2*(z-2))",
}

HEUN_Q = {
    "10": "(z*(x^2+6*x+8) - x^2 - 12*x - 12)/(4*(z-2)*(z-1)*z)",
    "11": "(z*(x^2+4*x+3) - x^2 - 12*x - 7)/(4*(z-2)*(z-1)*z)",
    "21": "(z*(x^2+8*x+15) - x^2 - 16*x - 27)/(4*(z-2)*(z-1)*z)",
    "generic": "(z*((x-2)*(x+4) + l^2 + 2*x*l + 2*l) - l^2 - 4*x*l - 2*l - 2*m^2 - 2*m"
               " - x^2 - 4*x + 12)/(4*(z-2)*(z-1)*z)",
}

# Intermediate form after z = r^2, with the potential left symbolic.
SQUARE_P = "3/(2*z) + x/(z-1)"
MOBIUS_P = "3/(2*z) + (1/2 - x)/(z-2) + x/(z-1)"

HYPERGEOM = {"a": "(3+x)/2", "b": "(2+x)/2", "c": "7/2"}
HYPERGEOM_P = "7/(2*z) + x/(z-1)"
HYPERGEOM_Q = "(x^2+5*x+6)/(4*(z-1)*z)"

# ---------------------------------------------------------------------------
# Recurrence coefficients
# ---------------------------------------------------------------------------

A_N = {
    "10": "(x^2+12*x+12*n^2+8*(x+4)*n+12)/(4*(2*n^2+9*n+7))",
    "11": "(x^2+12*x+12*n^2+8*x*n+28*n+7)/(8*n^2+36*n+28)",
    "21": "(x^2+16*x+12*n^2+8*x*n+44*n+27)/(8*n^2+44*n+36)",
    "generic": "(x^2+4*x+l^2+2*l*(2*x+6*n+1)+2*m^2+2*m+12*n^2+8*x*n+8*n-12)"
               "/(4*(n+1)*(2*l+2*n+3))",
}

B_N = {
    "10": "-(x+2*n)*(x+2*n+2)/(4*(n+1)*(2*n+7))",
    "11": "-(x+2*n-1)*(x+2*n+1)/(4*(n+1)*(2*n+7))",
    "21": "-(x+2*n+1)*(x+2*n+3)/(4*(n+1)*(2*n+9))",
    "generic": "-(x+l+2*n-4)*(x+l+2*n+2)/(4*(n+1)*(2*l+2*n+3))",
}

# ---------------------------------------------------------------------------
# Quasisolutions
# ---------------------------------------------------------------------------

QUASI = {
    "10": "x^2/(8*n^2+36*n+28) + x*(2*n+3)/(2*n^2+9*n+7) + (2*n+4)/(2*n+7)",
    "11": "x^2/(8*n^2+36*n+28) + x*(2*n+3)/(2*n^2+9*n+7) + (15*n+15)/(15*n+40)",
    "12": "x^2/(8*n^2+28*n+20) + x*(2*n+2)/(2*n^2+7*n+5) + (2*n+12)/(2*n+14)",
    "21": "x^2/(8*n^2+44*n+36) + x*(2*n+4)/(2*n^2+11*n+9) + (2*n+9)/(2*n+12)",
    "22": "x^2/(8*n^2+20*n+2*(8*n+8)+12) + x*(2*n+3)/(2*n^2+5*n+2*(2*n+2)+3)"
          " + (6*n+30)/(6*n+35)",
    "23": "x^2/(8*n^2+20*n+2*(8*n+8)+12) + x*(2*n+3)/(2*n^2+5*n+2*(2*n+2)+3)"
          " + (4*n+42)/(4*n+47)",
    "l1": "x^2/(l*(8*n+8)+8*n^2+20*n+12) + x*(l+2*n+1)/(l*(2*n+2)+2*n^2+5*n+3)"
          " + 3*(l-3)/(8*n+8) + (6*n+11)/(6*n+20)",
    "l2": "x^2/(l*(8*n+8)+8*n^2+20*n+12) + x*(l+2*n+1)/(l*(2*n+2)+2*n^2+5*n+3)"
          " + 3*(l-2)/(8*n+8) + (n+4)/(n+6)",
    "l3": "x^2/(l*(8*n+8)+8*n^2+20*n+12) + x*(l+2*n+1)/(l*(2*n+2)+2*n^2+5*n+3)"
          " + 3*(l-1)/(8*n+8) + (2*n+11)/(2*n+15)",
}

# ---------------------------------------------------------------------------
# Error bounds: (abar, bbar, n0, u)
# ---------------------------------------------------------------------------

BOUNDS = {
    "11": ("(72+125*n)/(300*(-3+5*n))", "(-11+16*n)/(4*(-1+8*n))", 2, "3/10"),
    "12": ("(75*n+266)/(150*(6*n+1))", "(25*n-11)/(50*(n+1))", 4, "1/3"),
    "21": ("(-71+100*n)/(300*(-5+4*n))", "(-37+50*n)/(25*(-1+4*n))", 2, "3/10"),
    "22": ("(125*n+482)/(300*(5*n+2))", "(400*n-179)/(100*(8*n+11))", 3, "3/10"),
    "23": ("(5*n+12)/(60*n)", "(125*n-96)/(50*(5*n+1))", 2, "3/10"),
    "32": ("(125*n-121)/(300*(5*n-7))", "(400*n-319)/(100*(8*n-3))", 2, "3/10"),
    "33": ("(800*n-443)/(600*(16*n-19))", "(104*n-133)/(8*(26*n-27))", 3, "3/10"),
    "l1": ("(-1016+272*l+125*n)/(300*(-23+5*l+5*n))", "(-63+11*l+20*n)/(20*(-9+2*l+2*n))",
           2, "3/10"),
    "l2": ("(-2810+887*l+512*n)/(48*(-515+128*l+128*n))",
           "(-9842+2071*l+2800*n)/(200*(-113+28*l+28*n))", 2, "3/10"),
    "l3": ("(-27+10*l+4*n)/(12*(-15+4*l+4*n))", "(-29+5*l+13*n)/(2*(-45+13*l+13*n))",
           2, "3/10"),
}

# ---------------------------------------------------------------------------
# Roots of the quasisolutions: lambda = pre * (-lin +- sqrt(arg))
# ---------------------------------------------------------------------------

ROOTS = {
    "l1": ("(l*(8*n+8)+8*n^2+20*n+12)/(4*l*n+4*l+4*n^2+10*n+6)", "l+2*n+1",
           "(6*l^2*n+20*l^2+30*l*n^2+199*l*n+162*l+48*n^3+262*n^2+313*n+218)/(8*(3*n+10))"),
    "l2": ("(l*(8*n+8)+8*n^2+20*n+12)/(4*l*n+4*l+4*n^2+10*n+6)", "l+2*n+1",
           "(2*l^2*n+12*l^2+10*l*n^2+95*l*n+50*l+16*n^3+132*n^2+106*n+60)/(8*(n+6))"),
    "l3": ("(l*(8*n+8)+8*n^2+20*n+12)/(4*l*n+4*l+4*n^2+10*n+6)", "l+2*n+1",
           "(4*l^2*n+30*l^2+20*l*n^2+208*l*n+19*l+32*n^3+300*n^2+116*n-9)/(8*(2*n+15))"),
    "11": ("(8*n^2+36*n+28)/(14+18*n+4*n^2)", "3+2*n",
           "(6*n^3+35*n^2+75*n+51)/(3*n+8)"),
    "12": ("(8*n^2+28*n+20)/(10+14*n+4*n^2)", "2+2*n",
           "(-2+13*n+17*n^2+2*n^3)/(n+7)"),
    "21": ("(8*n^2+44*n+36)/(18+22*n+4*n^2)", "4+2*n",
           "(4*n^3+40*n^2+107*n+111)/(2*n+12)"),
    "22": ("(8*n^2+36*n+28)/(4*n^2+18*n+14)", "3+2*n",
           "(12*n^3+98*n^2+162*n+105)/(6*n+35)"),
    "23": ("(8*n^2+36*n+28)/(4*n^2+18*n+14)", "3+2*n",
           "(8*n^3+116*n^2+194*n+129)/(4*n+47)"),
}

ROOT_DIFFERENCE = {
    "l1": "(18*l^2*n+60*l^2+66*l*n^2+169*l*n-2*l+48*n^3+154*n^2+31*n-138)/(8*(3*n+10))",
}

# ---------------------------------------------------------------------------
# Wall continued fractions: r_{n0} (numerator, denominator) and x_i
# ---------------------------------------------------------------------------

WALL_R = {
    "11": ("x^6+60*x^5+1201*x^4+10152*x^3+37851*x^2+55580*x+19635",
           "132*(x^4+32*x^3+266*x^2+592*x+245)"),
    "12": ("x^10+120*x^9+5655*x^8+138560*x^7+1969418*x^6+17090160*x^5"
           "+92390286*x^4+310928256*x^3+641783397*x^2+787540056*x+488363755",
           "260*(x^8+80*x^7+2356*x^6+33584*x^5+256238*x^4"
           "+1088432*x^3+2600580*x^2+3504848*x+2391129)"),
    "21": ("x^6+72*x^5+1813*x^4+20400*x^3+108019*x^2+251784*x+194103",
           "156*(x^4+40*x^3+458*x^2+1688*x+1701)"),
    "22": ("x^8+96*x^7+3456*x^6+60912*x^5+574976*x^4"
           "+2974208*x^3+8253120*x^2+11432704*x+6432768",
           "208*(x^6+60*x^5+1216*x^4+10488*x^3+39936*x^2+65984*x+40704)"),
    "33": ("x^8+112*x^7+4804*x^6+103408*x^5+1229214*x^4"
           "+8329808*x^3+31803380*x^2+63649104*x+52369065",
           "240*(x^6+72*x^5+1813*x^4+20400*x^3+109011*x^2+272264*x+260055)"),
    "l1": ("x^5+38*x^4+440*x^3+1816*x^2+2096*x+27*l^5+81*x*l^4+306*l^4"
           "+90*x^2*l^3+804*x*l^3+1224*l^3+46*x^3*l^2+744*x^2*l^2+2792*x*l^2"
           "+2104*l^2+11*x^4*l+284*x^3*l+2008*x^2*l+3984*x*l+1264*l",
           "12*(2*l+7)*(x^3+18*x^2+68*x+9*l^3+15*x*l^2+46*l^2+7*x^2*l+64*x*l+52*l)"),
    "l2": ("x^6+36*x^5+364*x^4+936*x^3-1536*x^2-4192*x+27*l^6"
           "+108*x*l^5+360*l^5+171*x^2*l^4+1236*x*l^4+1524*l^4+136*x^3*l^3+1632*x^2*l^3"
           "+4424*x*l^3+1944*l^3+57*x^4*l^2+1032*x^3*l^2+4704*x^2*l^2+4440*x*l^2-1440*l^2"
           "+12*x^5*l+312*x^4*l+2168*x^3*l+3432*x^2*l-3104*x*l-3360*l",
           "12*(2*l+7)*(x^4+16*x^3+32*x^2-136*x+9*l^4+24*x*l^3+52*l^3+22*x^2*l^2"
           "+112*x*l^2+24*l^2+8*x^3*l+76*x^2*l+56*x*l-120*l)"),
    "l3": ("x^6+36*x^5+376*x^4+1224*x^3+160*x^2-2112*x"
           "+27*l^6+108*x*l^5+468*l^5+171*x^2*l^4+1524*x*l^4+2832*l^4+136*x^3*l^3"
           "+1896*x^2*l^3+7112*x*l^3+7112*l^3+57*x^4*l^2+1128*x^3*l^2+6456*x^2*l^2"
           "+12120*x*l^2+6464*l^2+12*x^5*l+324*x^4*l+2552*x^3*l+6616*x^2*l+4256*x*l+576*l",
           "12*(2*l+7)*(x^4+16*x^3+40*x^2-72*x+9*l^4+24*x*l^3+76*l^3"
           "+22*x^2*l^2+144*x*l^2+144*l^2+8*x^3*l+84*x^2*l+152*x*l-24*l)"),
}

WALL_X = {
    "11": ("1/32", "64/495", "49005/110944", "55472/24255"),
    "12": ("1/80", "400/9681", "13388823/162909760", "16587243689536/113962657805643",
           "47531204298703335341887/191285306692074662805504",
           "17233719835941124753004235620352/40133868683257984044230012780567",
           "4841112694132470445768992098446182544921/6482346130187177237572701069669289181184",
           "141331078934075674653925376/166370224608919186154542269"),
    "21": ("1/40", "200/2079", "22869/83840", "16768/18711"),
    "22": ("1/60", "150/2603", "6775609/53687060", "21617253085827/80716560627608",
           "30048789523708855778/51443003963743308357", "6388007832023/4930439162424"),
    "33": ("1/72", "216/4589", "21058921/212658048", "117769389008256/605966643139039",
           "17436580563514884792601/45956710403723331293184",
           "27661586227277824/34339650333737805"),
    "l1": ("1/(7*l+18)", "(7*l+18)^2/(8*(12*l^3+84*l^2+197*l+153))",
           "(96*l^3+672*l^2+1576*l+1224)/((7*l+18)*(9*l^3+46*l^2+52*l))"),
    "l2": ("1/(8*l+16)", "8*(l+2)^2/(19*l^3+106*l^2+177*l+81)",
           "(19*l^3+106*l^2+177*l+81)^2/(8*(l+2)*(48*l^6+496*l^5+1880*l^4+2956*l^3"
           "+955*l^2-1962*l-1377))",
           "8*(48*l^6+496*l^5+1880*l^4+2956*l^3+955*l^2-1962*l-1377)"
           "/(l*(9*l^3+52*l^2+24*l-120)*(19*l^3+106*l^2+177*l+81))"),
    "l3": ("1/(8*l+16)", "8*(l+2)^2/(19*l^3+110*l^2+189*l+89)",
           "(19*l^3+110*l^2+189*l+89)^2/(8*(l+2)*(48*l^6+560*l^5+2424*l^4+4732*l^3"
           "+3723*l^2+86*l-801))",
           "8*(48*l^6+560*l^5+2424*l^4+4732*l^3+3723*l^2+86*l-801)"
           "/(l*(9*l^3+76*l^2+144*l-24)*(19*l^3+110*l^2+189*l+89))"),
}

SUPPLEMENT_FILES = ("11", "12", "21", "22", "23", "32", "33", "l1", "l2", "l3")
SUPPLEMENT_VARIABLES = ("A", "B", "n0", "r_{n0}", "rtilde", "a", "b", "esta", "estb", "esterror")
