#ifndef TRACERW_TRACERW_HPP
#define TRACERW_TRACERW_HPP

#include "hypergraph.hpp"
#include "cospan.hpp"
#include "term.hpp"
#include "extraction.hpp"
#include "dpo.hpp"
#include "circuits.hpp"
#include "io.hpp"

#endif
