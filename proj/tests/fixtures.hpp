#pragma once

// Parameters frozen from searches over the 1/2-limb (rotation 1/2).

namespace fixtures {

// First hit of the satellite predicate scanning denominators upward.
inline constexpr const char* satellite = "2/5";
// Preperiodic critical value: non-recurrent, not renormalizable.
inline constexpr const char* misiurewicz = "9/20";
// Critical value on a periodic cycle of period 3 (primitive renormalization).
inline constexpr const char* airplane = "3/7";

// Dyadic truncations of the angle with Fibonacci kneading (closest returns at
// Fibonacci times). Their combinatorics agree with a recurrent,
// non-renormalizable map far past the depths used in the tests.
inline constexpr const char* fibonacci56 = "32805425600716009/72057594037927936";
inline constexpr const char* fibonacci96 =
    "36069946902127721785061755077/79228162514264337593543950336";

// Periodic angles inside the level-24 critical piece of fibonacci96 that stay
// in the residual set (L = 23) up to depth 40.
inline constexpr const char* residual[] = {"571194/2097151", "1525957/2097151", "4679223479/17179869183",
                                          "12500645704/17179869183"};

}  // namespace fixtures
