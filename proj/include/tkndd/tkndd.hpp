#pragma once

#include "tkndd/baselines.hpp"
#include "tkndd/class_label.hpp"
#include "tkndd/classifier.hpp"
#include "tkndd/csv.hpp"
#include "tkndd/dom_repr.hpp"
#include "tkndd/dom_tree.hpp"
#include "tkndd/errors.hpp"
#include "tkndd/eval.hpp"
#include "tkndd/features.hpp"
#include "tkndd/html_parser.hpp"
#include "tkndd/parallel.hpp"
#include "tkndd/tree_kernels.hpp"
