#ifndef PAIRDESIGN_PAIRDESIGN_HPP
#define PAIRDESIGN_PAIRDESIGN_HPP

#include "pairdesign/combinatorics.hpp"
#include "pairdesign/designs.hpp"
#include "pairdesign/document.hpp"
#include "pairdesign/errors.hpp"
#include "pairdesign/matrix.hpp"
#include "pairdesign/model.hpp"
#include "pairdesign/optimality.hpp"
#include "pairdesign/oracle.hpp"
#include "pairdesign/report.hpp"
#include "pairdesign/simulate.hpp"
#include "pairdesign/version.hpp"

#endif  // PAIRDESIGN_PAIRDESIGN_HPP
