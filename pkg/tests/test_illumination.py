import numpy as np
import pytest

from bren import (
    compute_mixed_reflectance,
    estimate_illumination_gray_world,
    validate_illumination,
)


def test_two_pixel_mean():
    image = np.array([[[0.2, 0.4, 0.6], [0.4, 0.2, 0.2]]])
    assert np.allclose(
        estimate_illumination_gray_world(image), [0.3, 0.3, 0.4], atol=1e-15
    )


def test_uniform_image_returns_its_color():
    image = np.tile(np.array([0.25, 0.5, 0.75]), (2, 2, 1))
    assert np.array_equal(estimate_illumination_gray_world(image), [0.25, 0.5, 0.75])


def test_black_channel_rejected():
    image = np.zeros((4, 4, 3))
    image[:, :, 0] = 0.5
    image[:, :, 1] = 0.5
    with pytest.raises(ValueError):
        estimate_illumination_gray_world(image)


def test_empty_image_rejected():
    with pytest.raises(ValueError):
        estimate_illumination_gray_world(np.zeros((0, 4, 3)))


def test_validate_accepts_and_rejects():
    assert np.array_equal(validate_illumination((0.5, 0.5, 0.4)), [0.5, 0.5, 0.4])
    assert np.array_equal(validate_illumination((1, 1, 1)), [1.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        validate_illumination((0.5, 0.0, 0.4))
    with pytest.raises(ValueError):
        validate_illumination((0.5, 0.4))
    with pytest.raises(ValueError):
        validate_illumination((0.5, np.nan, 0.4))


@pytest.mark.parametrize("scale", [2.0, 0.5, 8.0])
def test_exposure_scaling_is_exact_for_dyadic_factors(scale):
    rng = np.random.default_rng(11)
    image = rng.uniform(0.05, 1.0, size=(6, 5, 3))
    e = estimate_illumination_gray_world(image)
    e_scaled = estimate_illumination_gray_world(scale * image)
    assert np.array_equal(e_scaled, scale * e)
    assert np.array_equal(
        compute_mixed_reflectance(scale * image, e_scaled),
        compute_mixed_reflectance(image, e),
    )


@pytest.mark.parametrize("scale", [1.7, 0.3])
def test_exposure_scaling_general_factors(scale):
    rng = np.random.default_rng(12)
    image = rng.uniform(0.05, 1.0, size=(6, 5, 3))
    p = compute_mixed_reflectance(image, estimate_illumination_gray_world(image))
    p_scaled = compute_mixed_reflectance(
        scale * image, estimate_illumination_gray_world(scale * image)
    )
    assert np.allclose(p_scaled, p, rtol=1e-12, atol=0)


def test_recovers_illumination_up_to_scalar_on_neutral_mean_scene():
    # two colors averaging to gray: mean reflectance is 0.5 per channel,
    # so the estimate must be exactly half the true illumination
    h, w = 8, 8
    reflectance = np.empty((h, w, 3))
    reflectance[:, : w // 2] = [0.8, 0.2, 0.2]
    reflectance[:, w // 2 :] = [0.2, 0.8, 0.8]
    e_true = np.array([0.9, 1.1, 0.7])
    estimate = estimate_illumination_gray_world(reflectance * e_true)
    assert np.allclose(estimate, 0.5 * e_true, rtol=1e-12)
