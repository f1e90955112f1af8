"""Drive the HTTP service through one chat-modification session.

Uses the in-process test client so no port is opened; `chatfsm serve`
exposes the same application over the network.
"""

from pathlib import Path

from fastapi.testclient import TestClient

from chatfsm import Cassette, CassetteMode, ChatGateway, FsmAgents, LlmProviderConfig
from chatfsm.service import create_app

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

cassette = Cassette(FIXTURES / "cassettes" / "gpt-4o-2024-05-13.json",
                    mode=CassetteMode.REPLAY)
agents = FsmAgents(ChatGateway(LlmProviderConfig(), cassette))
app = create_app(agents, codebase_dir=FIXTURES / "pairs" / "pair5" / "codebase")
client = TestClient(app)

code = (FIXTURES / "pairs" / "pair5" / "parent.py").read_text()
session = client.post("/sessions", json={"code": code}).json()
print("session:", session["sessionId"])

dot = client.get(f"/sessions/{session['sessionId']}/dot").text
print(dot)

request = (
    "Added state SAY_DETECT_HANDOVER announcing the detection step, "
    "transitioning from MOVE_HUMAN_HANDOVER_JOINT_GOAL on arm_at_goal; Added "
    "state SAY_CLOSE_NOW_GRIPPER announcing the gripper closing, "
    "transitioning from DETECT_HANDOVER on handover_detected; Wired "
    "SAY_DETECT_HANDOVER to DETECT_HANDOVER and SAY_CLOSE_NOW_GRIPPER to "
    "CLOSE_GRIPPER_HANDOVER on spoken."
)
change = client.post(f"/sessions/{session['sessionId']}/changes",
                     json={"request": request}).json()
print("diff messages:")
for line in change["diff"]["messages"]:
    print("  -", line)
