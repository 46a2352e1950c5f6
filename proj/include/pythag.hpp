#ifndef PYTHAG_PYTHAG_HPP_
#define PYTHAG_PYTHAG_HPP_

#include "pythag/binning.hpp"
#include "pythag/fit.hpp"
#include "pythag/gamelog.hpp"
#include "pythag/inference.hpp"
#include "pythag/matrix.hpp"
#include "pythag/optimize.hpp"
#include "pythag/predictor.hpp"
#include "pythag/report.hpp"
#include "pythag/season.hpp"
#include "pythag/simulate.hpp"
#include "pythag/special.hpp"
#include "pythag/weibull.hpp"

#endif // PYTHAG_PYTHAG_HPP_
