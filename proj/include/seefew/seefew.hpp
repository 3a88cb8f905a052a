/*
 * Copyright 2026 The seefew Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef SEEFEW_SEEFEW_HPP_
#define SEEFEW_SEEFEW_HPP_

#include "seefew/bert_encoder.hpp"
#include "seefew/corpus.hpp"
#include "seefew/encoder.hpp"
#include "seefew/entailing.hpp"
#include "seefew/expanding.hpp"
#include "seefew/inference.hpp"
#include "seefew/inventory.hpp"
#include "seefew/io.hpp"
#include "seefew/losses.hpp"
#include "seefew/model.hpp"
#include "seefew/seeding.hpp"
#include "seefew/span.hpp"
#include "seefew/toy_encoder.hpp"
#include "seefew/trainer.hpp"

#endif  // SEEFEW_SEEFEW_HPP_
