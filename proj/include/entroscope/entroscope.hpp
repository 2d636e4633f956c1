#ifndef ENTROSCOPE_ENTROSCOPE_HPP
#define ENTROSCOPE_ENTROSCOPE_HPP

#include "entroscope/charspace.hpp"
#include "entroscope/corpus.hpp"
#include "entroscope/error.hpp"
#include "entroscope/estimators.hpp"
#include "entroscope/generator.hpp"
#include "entroscope/metrics.hpp"
#include "entroscope/random.hpp"
#include "entroscope/report.hpp"

#endif // ENTROSCOPE_ENTROSCOPE_HPP
