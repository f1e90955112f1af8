import rospy
import smach


class PoseArm(smach.State):
    """Move the arm into a named joint pose."""

    def __init__(self, robot, arm_designator, pose_name):
        smach.State.__init__(self, outcomes=['posed', 'failed'])
        self.robot = robot
        self.arm_designator = arm_designator
        self.pose_name = pose_name

    def execute(self, userdata=None):
        arm = self.arm_designator.resolve()
        if arm is None or not arm.send_joint_goal(self.pose_name):
            return 'failed'
        arm.wait_for_motion_done()
        return 'posed'


class CarryPose(smach.State):
    """Tuck the arm into the carrying pose while holding an object."""

    def __init__(self, robot, arm_designator):
        smach.State.__init__(self, outcomes=['done'])
        self.robot = robot
        self.arm_designator = arm_designator

    def execute(self, userdata=None):
        arm = self.arm_designator.resolve()
        arm.send_joint_goal('carrying_pose')
        arm.wait_for_motion_done()
        return 'done'
