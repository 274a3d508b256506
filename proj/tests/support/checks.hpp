#ifndef SPLITENUM_TESTS_CHECKS_HPP
#define SPLITENUM_TESTS_CHECKS_HPP

#include <string>

#include "splitenum/powerseries.hpp"

// Series compare through their text form so failures print the coefficients.
inline std::string seriesText(const splitenum::Series& s) { return splitenum::toString(s); }

#define CHECK_SERIES(a, b) CHECK(seriesText(a) == seriesText(b))

#endif
