#ifndef FACEREC_FACEREC_HPP
#define FACEREC_FACEREC_HPP

#include "facerec/classifier.hpp"
#include "facerec/dataset.hpp"
#include "facerec/eigenspace.hpp"
#include "facerec/error.hpp"
#include "facerec/evaluation.hpp"
#include "facerec/features.hpp"
#include "facerec/image.hpp"
#include "facerec/model_io.hpp"

#endif // FACEREC_FACEREC_HPP
