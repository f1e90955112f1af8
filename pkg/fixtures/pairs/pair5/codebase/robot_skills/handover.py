import rospy
import smach


class DetectHandover(smach.State):
    """Wait for the force spike that signals the human grasping the object."""

    def __init__(self, robot, arm_designator, timeout=10.0):
        smach.State.__init__(self, outcomes=['handover_detected', 'timeout'])
        self.robot = robot
        self.arm_designator = arm_designator
        self.timeout = timeout

    def execute(self, userdata=None):
        arm = self.arm_designator.resolve()
        if arm.force_sensor.wait_for_pull(self.timeout):
            return 'handover_detected'
        return 'timeout'


class CloseGripperHandover(smach.State):
    """Close the gripper once the object has left it."""

    def __init__(self, robot, arm_designator):
        smach.State.__init__(self, outcomes=['gripper_closed'])
        self.robot = robot
        self.arm_designator = arm_designator

    def execute(self, userdata=None):
        arm = self.arm_designator.resolve()
        arm.send_gripper_goal('close', timeout=5.0)
        return 'gripper_closed'
