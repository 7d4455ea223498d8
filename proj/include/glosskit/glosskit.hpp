// Copyright (c) 2026, the glosskit authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "glosskit/adamw.hpp"
#include "glosskit/checkpoint.hpp"
#include "glosskit/encode.hpp"
#include "glosskit/errors.hpp"
#include "glosskit/eval.hpp"
#include "glosskit/gradcheck.hpp"
#include "glosskit/igt.hpp"
#include "glosskit/matrix.hpp"
#include "glosskit/model.hpp"
#include "glosskit/nn.hpp"
#include "glosskit/rng.hpp"
#include "glosskit/synthetic.hpp"
#include "glosskit/tokenize.hpp"
#include "glosskit/train.hpp"
#include "glosskit/utf8.hpp"
#include "glosskit/vocab.hpp"
