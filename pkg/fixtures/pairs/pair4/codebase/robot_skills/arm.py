import rospy
import smach


class PoseArm(smach.State):
    """Move the arm into a named joint pose."""

    def __init__(self, robot, arm_designator, pose_name):
        smach.State.__init__(self, outcomes=['posed'])
        self.robot = robot
        self.arm_designator = arm_designator
        self.pose_name = pose_name

    def execute(self, userdata=None):
        arm = self.arm_designator.resolve()
        arm.send_joint_goal(self.pose_name)
        arm.wait_for_motion_done()
        return 'posed'


class AttemptHandover(smach.State):
    """Offer the held object and release it when the human pulls."""

    def __init__(self, robot, arm_designator, timeout=15.0):
        smach.State.__init__(self, outcomes=['succeeded', 'failed'])
        self.robot = robot
        self.arm_designator = arm_designator
        self.timeout = timeout

    def execute(self, userdata=None):
        arm = self.arm_designator.resolve()
        if not arm.force_sensor.wait_for_pull(self.timeout):
            return 'failed'
        arm.send_gripper_goal('open', timeout=5.0)
        return 'succeeded'
