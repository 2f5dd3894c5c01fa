from __future__ import annotations

import pytest

from pilot.gateway import Gateway, ScriptedProvider, load_rule_table
from pilot.orchestrator import default_rules_path, default_skills_dir
from pilot.pia import scan_skills
from pilot.robotsim import LocalRobotClient, RobotSimulator


@pytest.fixture
def sim() -> RobotSimulator:
    return RobotSimulator()


@pytest.fixture
def robot(sim: RobotSimulator) -> LocalRobotClient:
    return LocalRobotClient(sim)


@pytest.fixture(scope="session")
def default_rules():
    return load_rule_table(default_rules_path())


@pytest.fixture
def default_gateway(default_rules) -> Gateway:
    return Gateway({"light": ScriptedProvider(default_rules)})


@pytest.fixture(scope="session")
def demo_inventory():
    inventory, warnings = scan_skills(default_skills_dir())
    assert not warnings
    return inventory
