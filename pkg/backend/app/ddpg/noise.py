import numpy as np


class OUNoise:
    """Ornstein-Uhlenbeck process, one independent dimension per action component."""

    def __init__(self, action_size: int, rng: np.random.Generator, theta: float = 0.15, sigma: float = 0.2, mu: float = 0.0):
        self.action_size = action_size
        self.theta = theta
        self.sigma = sigma
        self.mu = mu
        self.rng = rng
        self.reset()

    def reset(self) -> None:
        self.state = np.full(self.action_size, self.mu)

    def sample(self) -> np.ndarray:
        dx = self.theta * (self.mu - self.state) + self.sigma * self.rng.standard_normal(self.action_size)
        self.state = self.state + dx
        return self.state


class GaussianNoise:
    def __init__(self, action_size: int, rng: np.random.Generator, sigma: float = 0.1):
        self.action_size = action_size
        self.sigma = sigma
        self.rng = rng

    def reset(self) -> None:
        pass

    def sample(self) -> np.ndarray:
        return self.sigma * self.rng.standard_normal(self.action_size)
